#pragma once

#include <vector>

#include "osfl/matrix.hpp"

namespace osfl::losses {

/// Row-wise softmax with max subtraction.
Matrix softmax_rows(const Matrix& logits);

/// Row-wise log-softmax.
Matrix log_softmax_rows(const Matrix& logits);

struct CeResult {
  double loss = 0.0;  // mean over rows
  Matrix dlogits;     // (softmax - onehot) / b
};

/// Mean cross-entropy of softmax(logits) against integer labels.
CeResult ce_softmax(const Matrix& logits, const std::vector<int>& labels);

struct KlResult {
  double value = 0.0;  // mean_i KL(softmax(t_i/tau) || softmax(s_i/tau))
  Matrix d_teacher;
  Matrix d_student;
};

/// Temperature-softened KL divergence between two logit matrices, averaged
/// over rows, with gradients w.r.t. both sides.
KlResult kl_softmax(const Matrix& teacher_logits, const Matrix& student_logits,
                    double tau);

}  // namespace osfl::losses
