#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace osfl {

/// One row of the experiment metrics stream. Serialized as
/// method,seed,round,epoch,stage,metric,value.
struct MetricRow {
  std::string method;
  std::uint64_t seed = 0;
  int round = 0;
  int epoch = 0;
  std::string stage;
  std::string metric;
  double value = 0.0;
};

using MetricSink = std::vector<MetricRow>;

}  // namespace osfl
