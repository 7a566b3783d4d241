#pragma once

#include <cstddef>
#include <functional>

namespace osfl {

/// Worker cap from OSFL_LAB_THREADS (default: hardware concurrency, min 1).
int thread_budget();

/// Runs fn(i) for i in [0, n). Work items must be independent and write only
/// to their own slots so results do not depend on scheduling. threads <= 1
/// runs inline.
void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace osfl
