#pragma once

#include <cstddef>
#include <string_view>

// Arithmetic inner loops shared by the distance metrics, the classifiers and
// the nearest-neighbour scans. Scalar reference implementations always exist;
// on x86-64 an AVX2+FMA variant is selected at runtime when the CPU supports
// it, and on aarch64 a NEON variant is compiled in. The dispatched kernels
// agree with the scalar references to rounding error (see tests/test_kernels).
namespace cfx::kernels {

enum class Isa { scalar, avx2, neon };

// ISA chosen at startup. Overridable with the CFX_ISA environment variable
// ("scalar", "avx2" or "neon"); an unavailable request falls back to scalar.
Isa active_isa();

std::string_view isa_name(Isa isa);

// Switches the dispatch table. Returns false and leaves the table untouched
// when the requested ISA is not available on this machine. Not thread-safe;
// intended for tests and startup configuration.
bool force_isa(Isa isa);

bool isa_available(Isa isa);

// sum_i a[i]*b[i]
double dot(const double* a, const double* b, std::size_t n);

// sum_i |a[i]-b[i]| * inv_scale[i]
double scaled_l1(const double* a, const double* b, const double* inv_scale,
                 std::size_t n);

// sum_i |a[i]-b[i]| * inv_scale[i] * w[i]
//
// Accumulates in exactly the same order as scaled_l1, so a unit weight
// vector reproduces scaled_l1 bitwise (multiplication by 1.0 is exact).
// The counterfactual generator relies on this to make the weighted and
// unweighted search paths coincide when theta is all ones.
double weighted_scaled_l1(const double* a, const double* b,
                          const double* inv_scale, const double* w,
                          std::size_t n);

// y[i] += alpha * x[i]
void axpy(double alpha, const double* x, double* y, std::size_t n);

// Reference implementations, never dispatched.
namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
double scaled_l1(const double* a, const double* b, const double* inv_scale,
                 std::size_t n);
double weighted_scaled_l1(const double* a, const double* b,
                          const double* inv_scale, const double* w,
                          std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
}  // namespace scalar

}  // namespace cfx::kernels
