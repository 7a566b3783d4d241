#include "osfl/kernels.hpp"

namespace osfl::kernels {

namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void axpyh_scalar(double alpha, const double* x, const double* w, double* y,
                  std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i] * w[i];
}

void scale_scalar(double alpha, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

void hadamard_scalar(const double* a, const double* b, double* y,
                     std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = a[i] * b[i];
}

double reduce_sum_scalar(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

double reduce_max_scalar(const double* x, std::size_t n) {
  double m = x[0];
  for (std::size_t i = 1; i < n; ++i) m = x[i] > m ? x[i] : m;
  return m;
}

void leaky_relu_scalar(const double* x, double* y, std::size_t n,
                       double slope) {
  for (std::size_t i = 0; i < n; ++i) y[i] = x[i] > 0.0 ? x[i] : slope * x[i];
}

void leaky_relu_grad_scalar(const double* x, const double* dy, double* dx,
                            std::size_t n, double slope) {
  for (std::size_t i = 0; i < n; ++i) dx[i] = dy[i] * (x[i] > 0.0 ? 1.0 : slope);
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops table{dot_scalar,        axpy_scalar,
                         axpyh_scalar,      scale_scalar,
                         hadamard_scalar,   reduce_sum_scalar,
                         reduce_max_scalar, leaky_relu_scalar,
                         leaky_relu_grad_scalar};
  return table;
}

}  // namespace osfl::kernels
