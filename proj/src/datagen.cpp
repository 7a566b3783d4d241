#include "osfl/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "osfl/rng.hpp"

namespace osfl::data {

std::vector<double> class_mean(int class_j, int n_classes, int dim) {
  // Class angles on a circle; higher dimensions carry damped harmonics so all
  // coordinates are informative while pairwise distances stay dominated by
  // the first harmonic.
  constexpr double kRadius = 2.0;
  const double phi = 2.0 * M_PI * class_j / n_classes;
  std::vector<double> mu(dim, 0.0);
  for (int d = 0; d < dim; d += 2) {
    const int h = d / 2 + 1;
    const double amp = kRadius / h;
    mu[d] = amp * std::cos(h * phi);
    if (d + 1 < dim) mu[d + 1] = amp * std::sin(h * phi);
  }
  return mu;
}

LabeledDataset make_synthetic_dataset(int n_classes, int n_per_class,
                                      int feature_dim, double spread,
                                      std::uint64_t seed) {
  if (n_classes < 2) throw std::invalid_argument("invalid-argument: n_classes must be >= 2");
  if (n_per_class < 1) throw std::invalid_argument("invalid-argument: n_per_class must be >= 1");
  if (feature_dim < 2) throw std::invalid_argument("invalid-argument: feature_dim must be >= 2");
  if (spread < 0.0) throw std::invalid_argument("invalid-argument: spread must be >= 0");

  LabeledDataset ds;
  ds.n_classes = n_classes;
  const std::size_t n = static_cast<std::size_t>(n_classes) * n_per_class;
  ds.features = Matrix(n, feature_dim);
  ds.labels.resize(n);

  std::size_t row = 0;
  for (int j = 0; j < n_classes; ++j) {
    const auto mu = class_mean(j, n_classes, feature_dim);
    Rng rng(mix_seed(seed, {0x64617461ull, static_cast<std::uint64_t>(j)}));
    for (int i = 0; i < n_per_class; ++i, ++row) {
      ds.labels[row] = j;
      double* x = ds.features.row(row);
      for (int d = 0; d < feature_dim; ++d) x[d] = mu[d] + spread * rng.normal();
    }
  }
  return ds;
}

namespace {

// Largest-remainder rounding of proportions*total to integer counts that sum
// to total.
std::vector<int> apportion(const std::vector<double>& proportions, int total) {
  const std::size_t m = proportions.size();
  std::vector<int> counts(m, 0);
  std::vector<std::pair<double, std::size_t>> remainders(m);
  int assigned = 0;
  for (std::size_t k = 0; k < m; ++k) {
    const double exact = proportions[k] * total;
    counts[k] = static_cast<int>(std::floor(exact));
    assigned += counts[k];
    remainders[k] = {exact - counts[k], k};
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (int r = 0; r < total - assigned; ++r) counts[remainders[r % m].second]++;
  return counts;
}

std::vector<std::vector<std::size_t>> indices_by_class(const LabeledDataset& ds) {
  std::vector<std::vector<std::size_t>> by_class(ds.n_classes);
  for (std::size_t i = 0; i < ds.size(); ++i) by_class[ds.labels[i]].push_back(i);
  return by_class;
}

}  // namespace

PartitionSpec partition_dirichlet(const LabeledDataset& dataset, int m,
                                  double alpha, std::uint64_t seed,
                                  int max_retries) {
  if (m < 1) throw std::invalid_argument("invalid-argument: m must be >= 1");
  if (alpha <= 0.0) throw std::invalid_argument("invalid-argument: alpha must be > 0");

  const auto by_class = indices_by_class(dataset);

  for (int attempt = 0; attempt <= max_retries; ++attempt) {
    Rng rng(mix_seed(seed, {0x64697269ull, static_cast<std::uint64_t>(attempt)}));
    std::vector<std::vector<std::size_t>> clients(m);
    for (int j = 0; j < dataset.n_classes; ++j) {
      const auto p = rng.dirichlet(alpha, m);
      const auto counts = apportion(p, static_cast<int>(by_class[j].size()));
      std::size_t off = 0;
      for (int k = 0; k < m; ++k) {
        for (int i = 0; i < counts[k]; ++i)
          clients[k].push_back(by_class[j][off++]);
      }
    }
    const bool ok = std::all_of(clients.begin(), clients.end(),
                                [](const auto& c) { return !c.empty(); });
    if (ok) {
      PartitionSpec spec;
      spec.client_indices = std::move(clients);
      spec.alpha = alpha;
      spec.seed = seed;
      spec.scenario_tag = "dirichlet";
      return spec;
    }
  }
  throw std::runtime_error(
      "partition-failure: empty client after " + std::to_string(max_retries) +
      " redraws (alpha=" + std::to_string(alpha) + ", m=" + std::to_string(m) + ")");
}

PartitionSpec partition_two_class(const LabeledDataset& dataset, int m) {
  if (2 * m != dataset.n_classes)
    throw std::invalid_argument("invalid-argument: two_class needs 2*m == n_classes");
  const auto by_class = indices_by_class(dataset);
  PartitionSpec spec;
  spec.client_indices.resize(m);
  for (int k = 0; k < m; ++k) {
    auto& idx = spec.client_indices[k];
    idx = by_class[2 * k];
    idx.insert(idx.end(), by_class[2 * k + 1].begin(), by_class[2 * k + 1].end());
    std::sort(idx.begin(), idx.end());
  }
  spec.scenario_tag = "two_class";
  return spec;
}

PartitionSpec partition_iid(const LabeledDataset& dataset, int m,
                            std::uint64_t seed) {
  if (m < 1) throw std::invalid_argument("invalid-argument: m must be >= 1");
  auto by_class = indices_by_class(dataset);
  PartitionSpec spec;
  spec.client_indices.resize(m);
  Rng rng(mix_seed(seed, {0x69696464ull}));
  for (auto& cls : by_class) {
    rng.shuffle(cls);
    for (std::size_t i = 0; i < cls.size(); ++i)
      spec.client_indices[i % m].push_back(cls[i]);
  }
  for (auto& idx : spec.client_indices) std::sort(idx.begin(), idx.end());
  if (std::any_of(spec.client_indices.begin(), spec.client_indices.end(),
                  [](const auto& c) { return c.empty(); }))
    throw std::runtime_error("partition-failure: more clients than samples");
  spec.seed = seed;
  spec.scenario_tag = "iid";
  return spec;
}

std::vector<std::vector<int>> heterogeneity_summary(
    const PartitionSpec& partition, const LabeledDataset& dataset) {
  std::vector<std::vector<int>> table(partition.n_clients(),
                                      std::vector<int>(dataset.n_classes, 0));
  for (std::size_t k = 0; k < partition.n_clients(); ++k)
    for (std::size_t i : partition.client_indices[k]) {
      if (i >= dataset.size())
        throw std::invalid_argument("invalid-argument: partition index out of range");
      table[k][dataset.labels[i]]++;
    }
  return table;
}

LabeledDataset extract_shard(const LabeledDataset& dataset,
                             const std::vector<std::size_t>& indices) {
  LabeledDataset shard;
  shard.n_classes = dataset.n_classes;
  shard.features = Matrix(indices.size(), dataset.feature_dim());
  shard.labels.resize(indices.size());
  for (std::size_t r = 0; r < indices.size(); ++r) {
    const std::size_t i = indices[r];
    std::copy(dataset.features.row(i), dataset.features.row(i) + dataset.feature_dim(),
              shard.features.row(r));
    shard.labels[r] = dataset.labels[i];
  }
  return shard;
}

std::string partition_to_json(const PartitionSpec& p) {
  nlohmann::json j;
  j["scenario_tag"] = p.scenario_tag;
  j["alpha"] = p.alpha;
  j["seed"] = p.seed;
  j["client_indices"] = p.client_indices;
  return j.dump(2) + "\n";
}

PartitionSpec partition_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  PartitionSpec p;
  p.scenario_tag = j.at("scenario_tag").get<std::string>();
  p.alpha = j.at("alpha").get<double>();
  p.seed = j.at("seed").get<std::uint64_t>();
  p.client_indices = j.at("client_indices").get<std::vector<std::vector<std::size_t>>>();
  return p;
}

}  // namespace osfl::data
