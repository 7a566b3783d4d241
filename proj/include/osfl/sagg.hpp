#pragma once

#include <span>
#include <vector>

#include "osfl/matrix.hpp"
#include "osfl/stratify.hpp"

namespace osfl::sagg {

/// A batch of client prediction logits with the target labels assigned to
/// the batch.
struct LogitBatch {
  Matrix logits;           // b x c
  std::vector<int> labels; // length b
};

/// In-model weighting: column j of client k's logits scaled by U_col(j, k).
Matrix in_model_weight(const LogitBatch& p_k,
                       const stratify::CapabilityMatrices& caps, int k);

/// Stratified Aggregation: P(i, j) = sum_k U_row(y_i, k) * U_col(j, k) *
/// P_k(i, j). All client batches must share shape and label vector.
Matrix stratified_aggregate(std::span<const LogitBatch> per_client,
                            const stratify::CapabilityMatrices& caps);

/// Adjoint of stratified_aggregate: splits dL/dP into per-client dL/dP_k.
/// SA is linear in the client logits, so this is an elementwise weighting.
std::vector<Matrix> stratified_aggregate_grad(
    const Matrix& dP, const std::vector<int>& labels,
    const stratify::CapabilityMatrices& caps);

/// Row-wise argmax; ties break to the lowest class index.
std::vector<int> hard_labels(const Matrix& p);

}  // namespace osfl::sagg
