#include <cstdlib>
#include <stdexcept>
#include <string>

#include "osfl/kernels.hpp"

namespace osfl::kernels {

bool avx2_available() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma") &&
         avx2_ops() != nullptr;
#else
  return false;
#endif
}

namespace {

Isa select_isa() {
  const char* env = std::getenv("OSFL_LAB_SIMD");
  std::string mode = env ? env : "auto";
  if (mode == "scalar") return Isa::scalar;
  if (mode == "avx2") {
    if (!avx2_available())
      throw std::runtime_error("OSFL_LAB_SIMD=avx2 but AVX2+FMA not available");
    return Isa::avx2;
  }
  if (mode != "auto" && mode != "")
    throw std::runtime_error("invalid-argument: OSFL_LAB_SIMD must be scalar, avx2 or auto");
  return avx2_available() ? Isa::avx2 : Isa::scalar;
}

}  // namespace

Isa active_isa() {
  static const Isa isa = select_isa();
  return isa;
}

const Ops& ops() {
  static const Ops& table =
      active_isa() == Isa::avx2 ? *avx2_ops() : scalar_ops();
  return table;
}

std::string isa_name(Isa isa) {
  return isa == Isa::avx2 ? "avx2" : "scalar";
}

}  // namespace osfl::kernels
