#include "osfl/sagg.hpp"

#include <cmath>
#include <stdexcept>

#include "osfl/kernels.hpp"

namespace osfl::sagg {

namespace {

void check_labels(const std::vector<int>& labels, std::size_t b, std::size_t c) {
  if (labels.size() != b)
    throw std::invalid_argument("shape-mismatch: labels length vs batch rows");
  for (int y : labels)
    if (y < 0 || static_cast<std::size_t>(y) >= c)
      throw std::invalid_argument("label-out-of-range: " + std::to_string(y));
}

}  // namespace

Matrix in_model_weight(const LogitBatch& p_k,
                       const stratify::CapabilityMatrices& caps, int k) {
  const std::size_t c = caps.n_classes();
  if (k < 0 || static_cast<std::size_t>(k) >= caps.n_clients())
    throw std::invalid_argument("invalid-argument: client id out of range");
  if (p_k.logits.cols() != c)
    throw std::invalid_argument("shape-mismatch: logits cols vs n_classes");

  std::vector<double> col(c);
  for (std::size_t j = 0; j < c; ++j) col[j] = caps.U_col(j, k);

  Matrix out(p_k.logits.rows(), c);
  for (std::size_t i = 0; i < out.rows(); ++i)
    kernels::ops().hadamard(p_k.logits.row(i), col.data(), out.row(i), c);
  return out;
}

Matrix stratified_aggregate(std::span<const LogitBatch> per_client,
                            const stratify::CapabilityMatrices& caps) {
  const std::size_t m = caps.n_clients(), c = caps.n_classes();
  if (per_client.size() != m)
    throw std::invalid_argument("shape-mismatch: client batch count vs caps");
  const std::size_t b = per_client[0].logits.rows();
  for (const auto& pk : per_client) {
    if (pk.logits.rows() != b || pk.logits.cols() != c)
      throw std::invalid_argument("shape-mismatch: client logit shapes differ");
    if (pk.labels != per_client[0].labels)
      throw std::invalid_argument("shape-mismatch: client label vectors differ");
    for (std::size_t i = 0; i < pk.logits.size(); ++i)
      if (!std::isfinite(pk.logits.data()[i]))
        throw std::invalid_argument("invalid-argument: non-finite logits");
  }
  const auto& labels = per_client[0].labels;
  check_labels(labels, b, c);

  Matrix p(b, c);
  std::vector<double> col(c);
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t j = 0; j < c; ++j) col[j] = caps.U_col(j, k);
    for (std::size_t i = 0; i < b; ++i) {
      const double v = caps.U_row(labels[i], k);
      kernels::ops().axpyh(v, per_client[k].logits.row(i), col.data(),
                           p.row(i), c);
    }
  }
  return p;
}

std::vector<Matrix> stratified_aggregate_grad(
    const Matrix& dP, const std::vector<int>& labels,
    const stratify::CapabilityMatrices& caps) {
  const std::size_t m = caps.n_clients(), c = caps.n_classes();
  const std::size_t b = dP.rows();
  if (dP.cols() != c) throw std::invalid_argument("shape-mismatch: dP cols");
  check_labels(labels, b, c);

  std::vector<Matrix> grads(m, Matrix(b, c));
  std::vector<double> col(c);
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t j = 0; j < c; ++j) col[j] = caps.U_col(j, k);
    for (std::size_t i = 0; i < b; ++i) {
      const double v = caps.U_row(labels[i], k);
      kernels::ops().axpyh(v, dP.row(i), col.data(), grads[k].row(i), c);
    }
  }
  return grads;
}

std::vector<int> hard_labels(const Matrix& p) {
  std::vector<int> out(p.rows());
  for (std::size_t i = 0; i < p.rows(); ++i) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < p.cols(); ++j)
      if (p(i, j) > p(i, best)) best = j;
    out[i] = static_cast<int>(best);
  }
  return out;
}

}  // namespace osfl::sagg
