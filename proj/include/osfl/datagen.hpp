#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "osfl/matrix.hpp"

namespace osfl::data {

/// Feature matrix plus integer class labels in [0, n_classes).
struct LabeledDataset {
  Matrix features;          // n_samples x feature_dim
  std::vector<int> labels;  // length n_samples
  int n_classes = 0;

  std::size_t size() const { return labels.size(); }
  std::size_t feature_dim() const { return features.cols(); }
};

/// Per-client index lists into a parent dataset.
struct PartitionSpec {
  std::vector<std::vector<std::size_t>> client_indices;
  double alpha = 0.0;  // Dirichlet concentration; 0 when not applicable
  std::uint64_t seed = 0;
  std::string scenario_tag;  // dirichlet | two_class | iid

  std::size_t n_clients() const { return client_indices.size(); }
};

/// Class mean for class j of c classes embedded in `dim` dimensions.
/// Deterministic in (j, c, dim) only: harmonics of a circle, so the layout is
/// identical across draws and train/test splits share the same blob centers.
std::vector<double> class_mean(int class_j, int n_classes, int dim);

/// Gaussian blobs, n_per_class samples per class, isotropic spread around
/// class means. Deterministic for a fixed seed.
LabeledDataset make_synthetic_dataset(int n_classes, int n_per_class,
                                      int feature_dim, double spread,
                                      std::uint64_t seed);

/// Per-class Dir(alpha) proportions over m clients, largest-remainder
/// rounding; redraws the whole partition while a client ends up empty.
PartitionSpec partition_dirichlet(const LabeledDataset& dataset, int m,
                                  double alpha, std::uint64_t seed,
                                  int max_retries = 100);

/// Client k gets every sample of classes 2k and 2k+1; requires 2m == c.
PartitionSpec partition_two_class(const LabeledDataset& dataset, int m);

/// Class-stratified round-robin split; per-client class counts within +-1.
PartitionSpec partition_iid(const LabeledDataset& dataset, int m,
                            std::uint64_t seed);

/// Entry (k, j): number of class-j samples held by client k.
std::vector<std::vector<int>> heterogeneity_summary(
    const PartitionSpec& partition, const LabeledDataset& dataset);

/// Shard view: copies client k's rows into a standalone dataset.
LabeledDataset extract_shard(const LabeledDataset& dataset,
                             const std::vector<std::size_t>& indices);

std::string partition_to_json(const PartitionSpec& p);
PartitionSpec partition_from_json(const std::string& text);

}  // namespace osfl::data
