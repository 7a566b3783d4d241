#include "osfl/matrix.hpp"

#include <cmath>
#include <stdexcept>

#include "osfl/kernels.hpp"

namespace osfl {

Matrix Matrix::from_rows(
    std::initializer_list<std::initializer_list<double>> rows) {
  Matrix m(rows.size(), rows.begin()->size());
  std::size_t r = 0;
  for (const auto& row : rows) {
    if (row.size() != m.cols())
      throw std::invalid_argument("from_rows: ragged rows");
    std::size_t c = 0;
    for (double v : row) m(r, c++) = v;
    ++r;
  }
  return m;
}

Matrix& Matrix::operator+=(const Matrix& o) {
  if (!same_shape(o)) throw std::invalid_argument("shape-mismatch: operator+=");
  kernels::ops().axpy(1.0, o.data(), data(), size());
  return *this;
}

Matrix& Matrix::operator*=(double a) {
  kernels::ops().scale(a, data(), size());
  return *this;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) throw std::invalid_argument("shape-mismatch: matmul_nt");
  const auto& k = kernels::ops();
  Matrix c(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.rows(); ++j)
      c(i, j) = k.dot(a.row(i), b.row(j), a.cols());
  return c;
}

Matrix matmul_nn(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("shape-mismatch: matmul_nn");
  const auto& k = kernels::ops();
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t p = 0; p < a.cols(); ++p)
      k.axpy(a(i, p), b.row(p), c.row(i), b.cols());
  return c;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("shape-mismatch: matmul_tn");
  const auto& k = kernels::ops();
  Matrix c(a.cols(), b.cols());
  for (std::size_t p = 0; p < a.rows(); ++p)
    for (std::size_t i = 0; i < a.cols(); ++i)
      k.axpy(a(p, i), b.row(p), c.row(i), b.cols());
  return c;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("shape-mismatch: max_abs_diff");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::fabs(a.data()[i] - b.data()[i]));
  return m;
}

}  // namespace osfl
