#pragma once

#include <cstdint>
#include <functional>

#include "osfl/datagen.hpp"
#include "osfl/nn.hpp"

namespace osfl::client {

/// One client's model plus its local data shard.
struct ClientBundle {
  nn::Model model;
  data::LabeledDataset shard;
  int client_id = 0;
};

/// Per-epoch training observer: (epoch, mean_loss, train_accuracy).
using EpochObserver = std::function<void(int, double, double)>;

/// Mini-batch SGD on softmax cross-entropy over the bundle's shard. Batches
/// are reshuffled every epoch from the seed stream; the input model is left
/// untouched and the trained copy returned. E == 0 returns an identical copy.
nn::Model local_update(const ClientBundle& bundle, int epochs, int batch_size,
                       double lr, std::uint64_t seed,
                       const EpochObserver& observer = nullptr);

}  // namespace osfl::client
