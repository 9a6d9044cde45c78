#include <cmath>

#include "cfx/kernels.hpp"

namespace cfx::kernels::scalar {

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double scaled_l1(const double* a, const double* b, const double* inv_scale,
                 std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::abs(a[i] - b[i]) * inv_scale[i];
  return s;
}

double weighted_scaled_l1(const double* a, const double* b,
                          const double* inv_scale, const double* w,
                          std::size_t n) {
  // Same accumulation order as scaled_l1; w[i] == 1.0 reduces to it bitwise.
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    s += std::abs(a[i] - b[i]) * inv_scale[i] * w[i];
  return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace cfx::kernels::scalar
