// NEON kernels for aarch64. float64x2 lanes; every AArch64 core has NEON so
// no runtime check is needed beyond the architecture itself.

#include <arm_neon.h>

#include <cmath>
#include <cstddef>

#include "kernels_impl.hpp"

namespace cfx::kernels::neon {

double dot(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  for (; i + 2 <= n; i += 2)
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
  double s = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

double scaled_l1(const double* a, const double* b, const double* inv_scale,
                 std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t d = vabdq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
    acc = vaddq_f64(acc, vmulq_f64(d, vld1q_f64(inv_scale + i)));
  }
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) s += std::abs(a[i] - b[i]) * inv_scale[i];
  return s;
}

double weighted_scaled_l1(const double* a, const double* b,
                          const double* inv_scale, const double* w,
                          std::size_t n) {
  // Mirrors scaled_l1 so that w == 1 reduces to it bitwise.
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t d = vabdq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
    float64x2_t t = vmulq_f64(d, vld1q_f64(inv_scale + i));
    acc = vaddq_f64(acc, vmulq_f64(t, vld1q_f64(w + i)));
  }
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) s += std::abs(a[i] - b[i]) * inv_scale[i] * w[i];
  return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace cfx::kernels::neon
