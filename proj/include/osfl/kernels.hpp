#pragma once

#include <cstddef>
#include <string>

// Data-parallel inner loops used by the matrix and neural-net code.
// A scalar reference implementation always exists; an AVX2+FMA variant is
// selected at runtime when the CPU supports it. The two are equivalence-tested
// against each other (reduction order differs, so agreement is to ~1e-12
// relative, not bit-exact).
//
// Selection: OSFL_LAB_SIMD=scalar|avx2|auto (default auto).

namespace osfl::kernels {

enum class Isa { scalar, avx2 };

struct Ops {
  // sum_i a[i]*b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // y[i] += alpha * x[i] * w[i]   (fused weighting used by stratified aggregation)
  void (*axpyh)(double alpha, const double* x, const double* w, double* y,
                std::size_t n);
  // x[i] *= alpha
  void (*scale)(double alpha, double* x, std::size_t n);
  // y[i] = a[i] * b[i]
  void (*hadamard)(const double* a, const double* b, double* y, std::size_t n);
  double (*reduce_sum)(const double* x, std::size_t n);
  double (*reduce_max)(const double* x, std::size_t n);
  // y[i] = x[i] > 0 ? x[i] : slope * x[i]
  void (*leaky_relu)(const double* x, double* y, std::size_t n, double slope);
  // dx[i] = dy[i] * (x[i] > 0 ? 1 : slope)
  void (*leaky_relu_grad)(const double* x, const double* dy, double* dx,
                          std::size_t n, double slope);
};

const Ops& scalar_ops();
bool avx2_available();
const Ops* avx2_ops();  // nullptr when not compiled in / not supported

// Active table, chosen once per process (detection + OSFL_LAB_SIMD override).
const Ops& ops();
Isa active_isa();
std::string isa_name(Isa isa);

}  // namespace osfl::kernels
