#include "cfx/kernels.hpp"

#include <cstdlib>
#include <string_view>

#include "kernels_impl.hpp"

namespace cfx::kernels {

namespace {

using DotFn = double (*)(const double*, const double*, std::size_t);
using ScaledL1Fn = double (*)(const double*, const double*, const double*,
                              std::size_t);
using WeightedL1Fn = double (*)(const double*, const double*, const double*,
                                const double*, std::size_t);
using AxpyFn = void (*)(double, const double*, double*, std::size_t);

struct Table {
  Isa isa;
  DotFn dot;
  ScaledL1Fn scaled_l1;
  WeightedL1Fn weighted_scaled_l1;
  AxpyFn axpy;
};

Table table_for(Isa isa) {
  switch (isa) {
#ifdef CFX_HAVE_AVX2_TU
    case Isa::avx2:
      return {Isa::avx2, &avx2::dot, &avx2::scaled_l1,
              &avx2::weighted_scaled_l1, &avx2::axpy};
#endif
#ifdef CFX_HAVE_NEON_TU
    case Isa::neon:
      return {Isa::neon, &neon::dot, &neon::scaled_l1,
              &neon::weighted_scaled_l1, &neon::axpy};
#endif
    default:
      return {Isa::scalar, &scalar::dot, &scalar::scaled_l1,
              &scalar::weighted_scaled_l1, &scalar::axpy};
  }
}

Isa detect() {
  if (const char* env = std::getenv("CFX_ISA")) {
    std::string_view v(env);
    if (v == "scalar") return Isa::scalar;
    if (v == "avx2" && isa_available(Isa::avx2)) return Isa::avx2;
    if (v == "neon" && isa_available(Isa::neon)) return Isa::neon;
    return Isa::scalar;
  }
  if (isa_available(Isa::avx2)) return Isa::avx2;
  if (isa_available(Isa::neon)) return Isa::neon;
  return Isa::scalar;
}

Table& table() {
  static Table t = table_for(detect());
  return t;
}

}  // namespace

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#ifdef CFX_HAVE_AVX2_TU
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::neon:
#ifdef CFX_HAVE_NEON_TU
      return true;
#else
      return false;
#endif
  }
  return false;
}

Isa active_isa() { return table().isa; }

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
    case Isa::neon:
      return "neon";
  }
  return "unknown";
}

bool force_isa(Isa isa) {
  if (!isa_available(isa)) return false;
  table() = table_for(isa);
  return true;
}

double dot(const double* a, const double* b, std::size_t n) {
  return table().dot(a, b, n);
}

double scaled_l1(const double* a, const double* b, const double* inv_scale,
                 std::size_t n) {
  return table().scaled_l1(a, b, inv_scale, n);
}

double weighted_scaled_l1(const double* a, const double* b,
                          const double* inv_scale, const double* w,
                          std::size_t n) {
  return table().weighted_scaled_l1(a, b, inv_scale, w, n);
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  table().axpy(alpha, x, y, n);
}

}  // namespace cfx::kernels
