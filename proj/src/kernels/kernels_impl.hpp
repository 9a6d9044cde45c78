#pragma once

#include <cstddef>

// Declarations for the per-ISA translation units. Only the units actually
// compiled for the target architecture provide definitions; the dispatcher
// guards every reference behind the matching CFX_HAVE_*_TU macro.
namespace cfx::kernels {

namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
double scaled_l1(const double* a, const double* b, const double* inv_scale,
                 std::size_t n);
double weighted_scaled_l1(const double* a, const double* b,
                          const double* inv_scale, const double* w,
                          std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
}  // namespace avx2

namespace neon {
double dot(const double* a, const double* b, std::size_t n);
double scaled_l1(const double* a, const double* b, const double* inv_scale,
                 std::size_t n);
double weighted_scaled_l1(const double* a, const double* b,
                          const double* inv_scale, const double* w,
                          std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
}  // namespace neon

}  // namespace cfx::kernels
