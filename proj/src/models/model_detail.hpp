#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "cfx/dataset.hpp"

namespace cfx::detail {

inline double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

// log(1 + exp(t)) without overflow
inline double softplus(double t) {
  if (t > 0.0) return t + std::log1p(std::exp(-t));
  return std::log1p(std::exp(t));
}

// Inverse-frequency class weights: n / (2 * count(class)).
inline std::pair<double, double> class_weights(const Dataset& data,
                                               bool balanced) {
  if (!balanced) return {1.0, 1.0};
  const double n = static_cast<double>(data.rows());
  const double n1 = static_cast<double>(data.count_class(1));
  const double n0 = n - n1;
  return {n / (2.0 * n0), n / (2.0 * n1)};
}

// Per-call scratch for scoring in original units.
inline std::vector<double>& scratch_buffer(std::size_t n) {
  thread_local std::vector<double> buf;
  buf.resize(n);
  return buf;
}

}  // namespace cfx::detail
