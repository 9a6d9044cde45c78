#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "cfx/dataset.hpp"
#include "cfx/models.hpp"

namespace cfx::test {

// ---------------------------------------------------------------------------
// Independent brute-force oracles. These implement the defining formulas
// literally and must not share code with the library paths they check.
// ---------------------------------------------------------------------------

// Median by full sort; even lengths average the two central elements.
inline double oracle_median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// MAD_j = median_i |x_ij - median_l(x_lj)|, written out literally.
inline double oracle_mad(const std::vector<double>& column) {
  const double med = oracle_median(column);
  std::vector<double> dev;
  dev.reserve(column.size());
  for (double v : column) dev.push_back(std::fabs(v - med));
  return oracle_median(dev);
}

// d(x, x') = sum_j |x_j - x'_j| / MAD_j over mutable features.
inline double oracle_mad_distance(const std::vector<double>& x,
                                  const std::vector<double>& xp,
                                  const std::vector<cfx::FeatureSpec>& specs) {
  double total = 0.0;
  for (std::size_t j = 0; j < specs.size(); ++j) {
    if (!specs[j].is_mutable) continue;
    total += std::fabs(x[j] - xp[j]) / specs[j].mad;
  }
  return total;
}

// d2(x, x') = sum_j |x_j - x'_j| / MAD_j * theta_j.
inline double oracle_weighted_distance(const std::vector<double>& x,
                                       const std::vector<double>& xp,
                                       const std::vector<cfx::FeatureSpec>& specs,
                                       const std::vector<double>& theta) {
  double total = 0.0;
  for (std::size_t j = 0; j < specs.size(); ++j) {
    if (!specs[j].is_mutable) continue;
    total += std::fabs(x[j] - xp[j]) / specs[j].mad * theta[j];
  }
  return total;
}

// One-way ANOVA F with two groups, from group means and sums of squares.
inline double oracle_anova_f(const std::vector<double>& values,
                             const std::vector<int>& targets) {
  double s0 = 0.0, s1 = 0.0;
  std::size_t n0 = 0, n1 = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (targets[i] == 1) {
      s1 += values[i];
      ++n1;
    } else {
      s0 += values[i];
      ++n0;
    }
  }
  const double m0 = s0 / static_cast<double>(n0);
  const double m1 = s1 / static_cast<double>(n1);
  const double grand = (s0 + s1) / static_cast<double>(values.size());
  double ssb = static_cast<double>(n0) * (m0 - grand) * (m0 - grand) +
               static_cast<double>(n1) * (m1 - grand) * (m1 - grand);
  double ssw = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double m = targets[i] == 1 ? m1 : m0;
    ssw += (values[i] - m) * (values[i] - m);
  }
  if (ssb == 0.0) return 0.0;
  if (ssw == 0.0) return std::numeric_limits<double>::infinity();
  const double msb = ssb / 1.0;
  const double msw = ssw / static_cast<double>(values.size() - 2);
  return msb / msw;
}

inline double rel_err(double got, double want) {
  const double denom = std::max({std::fabs(got), std::fabs(want), 1e-300});
  return std::fabs(got - want) / denom;
}

// ---------------------------------------------------------------------------
// Construction helpers
// ---------------------------------------------------------------------------

// Dataset from explicit rows; bounds inferred as column min/max, every
// feature mutable (the Dataset constructor may still freeze constants).
inline cfx::Dataset make_dataset(const std::vector<std::vector<double>>& rows,
                                 const std::vector<int>& targets) {
  const std::size_t p = rows.at(0).size();
  std::vector<double> values;
  values.reserve(rows.size() * p);
  for (const auto& r : rows) values.insert(values.end(), r.begin(), r.end());
  std::vector<cfx::FeatureSpec> specs(p);
  for (std::size_t j = 0; j < p; ++j) {
    specs[j].name = "f" + std::to_string(j);
    double lo = rows[0][j], hi = rows[0][j];
    for (const auto& r : rows) {
      lo = std::min(lo, r[j]);
      hi = std::max(hi, r[j]);
    }
    specs[j].lower = lo;
    specs[j].upper = hi;
  }
  return cfx::Dataset(std::move(values), targets, std::move(specs));
}

// Fixed-score stub.
class ConstPredictor final : public cfx::Predictor {
 public:
  explicit ConstPredictor(double score) : score_(score) {}
  double score(std::span<const double>) const override { return score_; }
  std::string kind() const override { return "const-stub"; }
  nlohmann::ordered_json to_json() const override { return {}; }

 private:
  double score_;
};

// score(x) = sigmoid(x[0]); the analytic 1-D case.
class SigmoidPredictor final : public cfx::Predictor {
 public:
  double score(std::span<const double> x) const override {
    return 1.0 / (1.0 + std::exp(-x[0]));
  }
  std::string kind() const override { return "sigmoid-stub"; }
  nlohmann::ordered_json to_json() const override { return {}; }
};

// Thresholds the first feature: score = sigmoid(k * (x[0] - cut)).
class ThresholdPredictor final : public cfx::Predictor {
 public:
  ThresholdPredictor(double cut, double k) : cut_(cut), k_(k) {}
  double score(std::span<const double> x) const override {
    return 1.0 / (1.0 + std::exp(-k_ * (x[0] - cut_)));
  }
  std::string kind() const override { return "threshold-stub"; }
  nlohmann::ordered_json to_json() const override { return {}; }

 private:
  double cut_, k_;
};

}  // namespace cfx::test
