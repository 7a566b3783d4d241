#include "osfl/client.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "osfl/losses.hpp"
#include "osfl/rng.hpp"

namespace osfl::client {

nn::Model local_update(const ClientBundle& bundle, int epochs, int batch_size,
                       double lr, std::uint64_t seed,
                       const EpochObserver& observer) {
  if (bundle.shard.size() == 0)
    throw std::invalid_argument("invalid-argument: empty shard");
  if (epochs < 0) throw std::invalid_argument("invalid-argument: epochs < 0");
  if (batch_size < 1) throw std::invalid_argument("invalid-argument: batch_size < 1");
  if (lr <= 0.0) throw std::invalid_argument("invalid-argument: lr <= 0");
  if (bundle.model.n_outputs() != static_cast<std::size_t>(bundle.shard.n_classes))
    throw std::invalid_argument("shape-mismatch: model outputs vs shard classes");

  nn::Model model = bundle.model;
  const std::size_t n = bundle.shard.size();
  const std::size_t dim = bundle.shard.feature_dim();

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  // batch boundaries; a trailing singleton is merged into the previous batch
  // because train-mode batchnorm needs at least two rows
  std::vector<std::pair<std::size_t, std::size_t>> batches;
  for (std::size_t start = 0; start < n; start += batch_size)
    batches.emplace_back(start, std::min<std::size_t>(batch_size, n - start));
  if (batches.size() >= 2 && batches.back().second == 1) {
    batches.pop_back();
    batches.back().second += 1;
  }

  for (int epoch = 0; epoch < epochs; ++epoch) {
    Rng rng(mix_seed(seed, {0x65706f63ull, static_cast<std::uint64_t>(epoch)}));
    rng.shuffle(order);

    double loss_sum = 0.0;
    std::size_t correct = 0;
    for (const auto& [start, b] : batches) {
      Matrix x(b, dim);
      std::vector<int> y(b);
      for (std::size_t r = 0; r < b; ++r) {
        const std::size_t i = order[start + r];
        std::copy(bundle.shard.features.row(i), bundle.shard.features.row(i) + dim,
                  x.row(r));
        y[r] = bundle.shard.labels[i];
      }
      const Matrix logits =
          model.forward(x, b >= 2 ? nn::Mode::train : nn::Mode::eval);
      auto ce = losses::ce_softmax(logits, y);
      if (!std::isfinite(ce.loss))
        throw std::runtime_error("non-finite-loss: client " +
                                 std::to_string(bundle.client_id) + " epoch " +
                                 std::to_string(epoch));
      loss_sum += ce.loss * static_cast<double>(b);
      for (std::size_t r = 0; r < b; ++r) {
        std::size_t best = 0;
        for (std::size_t j = 1; j < logits.cols(); ++j)
          if (logits(r, j) > logits(r, best)) best = j;
        if (static_cast<int>(best) == y[r]) ++correct;
      }
      model.zero_grad();
      model.backward(ce.dlogits);
      model.sgd_step(lr);
    }
    if (observer)
      observer(epoch, loss_sum / static_cast<double>(n),
               static_cast<double>(correct) / static_cast<double>(n));
  }
  return model;
}

}  // namespace osfl::client
