#include "osfl/losses.hpp"

#include <cmath>
#include <stdexcept>

#include "osfl/kernels.hpp"

namespace osfl::losses {

Matrix softmax_rows(const Matrix& logits) {
  const auto& k = kernels::ops();
  Matrix p(logits.rows(), logits.cols());
  for (std::size_t i = 0; i < logits.rows(); ++i) {
    const double m = k.reduce_max(logits.row(i), logits.cols());
    double* pi = p.row(i);
    for (std::size_t j = 0; j < logits.cols(); ++j)
      pi[j] = std::exp(logits(i, j) - m);
    const double z = k.reduce_sum(pi, logits.cols());
    k.scale(1.0 / z, pi, logits.cols());
  }
  return p;
}

Matrix log_softmax_rows(const Matrix& logits) {
  const auto& k = kernels::ops();
  Matrix lp(logits.rows(), logits.cols());
  for (std::size_t i = 0; i < logits.rows(); ++i) {
    const double m = k.reduce_max(logits.row(i), logits.cols());
    double z = 0.0;
    for (std::size_t j = 0; j < logits.cols(); ++j)
      z += std::exp(logits(i, j) - m);
    const double lse = m + std::log(z);
    for (std::size_t j = 0; j < logits.cols(); ++j)
      lp(i, j) = logits(i, j) - lse;
  }
  return lp;
}

CeResult ce_softmax(const Matrix& logits, const std::vector<int>& labels) {
  if (labels.size() != logits.rows())
    throw std::invalid_argument("shape-mismatch: ce labels vs logits rows");
  const std::size_t b = logits.rows(), c = logits.cols();
  const Matrix lp = log_softmax_rows(logits);
  CeResult out;
  out.dlogits = Matrix(b, c);
  for (std::size_t i = 0; i < b; ++i) {
    const int y = labels[i];
    if (y < 0 || static_cast<std::size_t>(y) >= c)
      throw std::invalid_argument("label-out-of-range: ce label " + std::to_string(y));
    out.loss -= lp(i, y);
    for (std::size_t j = 0; j < c; ++j)
      out.dlogits(i, j) = std::exp(lp(i, j)) / static_cast<double>(b);
    out.dlogits(i, y) -= 1.0 / static_cast<double>(b);
  }
  out.loss /= static_cast<double>(b);
  return out;
}

KlResult kl_softmax(const Matrix& teacher_logits, const Matrix& student_logits,
                    double tau) {
  if (!teacher_logits.same_shape(student_logits))
    throw std::invalid_argument("shape-mismatch: kl teacher vs student");
  if (tau <= 0.0) throw std::invalid_argument("invalid-argument: tau must be > 0");
  const std::size_t b = teacher_logits.rows(), c = teacher_logits.cols();

  Matrix t_scaled(b, c), s_scaled(b, c);
  for (std::size_t i = 0; i < b * c; ++i) {
    t_scaled.data()[i] = teacher_logits.data()[i] / tau;
    s_scaled.data()[i] = student_logits.data()[i] / tau;
  }
  const Matrix lp = log_softmax_rows(t_scaled);
  const Matrix lq = log_softmax_rows(s_scaled);

  KlResult out;
  out.d_teacher = Matrix(b, c);
  out.d_student = Matrix(b, c);
  const double inv_b = 1.0 / static_cast<double>(b);
  for (std::size_t i = 0; i < b; ++i) {
    double kl_i = 0.0;
    for (std::size_t j = 0; j < c; ++j)
      kl_i += std::exp(lp(i, j)) * (lp(i, j) - lq(i, j));
    out.value += kl_i * inv_b;
    for (std::size_t j = 0; j < c; ++j) {
      const double p = std::exp(lp(i, j));
      const double q = std::exp(lq(i, j));
      out.d_student(i, j) = (q - p) * inv_b / tau;
      out.d_teacher(i, j) = p * ((lp(i, j) - lq(i, j)) - kl_i) * inv_b / tau;
    }
  }
  return out;
}

}  // namespace osfl::losses
