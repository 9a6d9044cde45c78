#include "cfx/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cfx {

namespace {

// Shared tail of both strategies: min-max normalise the raw importances over
// the mutable features, invert through 1/(v + c), zero out immutable
// features and renormalise to mean 1. All-equal importances give uniform
// weights.
WeightVector importance_to_theta(const std::vector<double>& raw,
                                 std::span<const FeatureSpec> specs,
                                 double smoothing) {
  if (!(smoothing > 0.0))
    throw std::invalid_argument("theta: smoothing must be > 0");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < specs.size(); ++j) {
    if (!specs[j].is_mutable) continue;
    lo = std::min(lo, raw[j]);
    hi = std::max(hi, raw[j]);
  }
  std::vector<double> theta(specs.size(), 0.0);
  for (std::size_t j = 0; j < specs.size(); ++j) {
    if (!specs[j].is_mutable) continue;
    const double normalized = hi > lo ? (raw[j] - lo) / (hi - lo) : 0.0;
    theta[j] = 1.0 / (normalized + smoothing);
  }
  return WeightVector::from_raw(std::move(theta), specs);
}

}  // namespace

double anova_f(const Dataset& data, std::size_t feature) {
  if (feature >= data.cols())
    throw std::invalid_argument("anova_f: feature index out of range");
  const std::size_t n = data.rows();
  if (n < 3) throw std::invalid_argument("anova_f: need at least 3 rows");

  double sum[2] = {0.0, 0.0};
  std::size_t count[2] = {0, 0};
  for (std::size_t i = 0; i < n; ++i) {
    const int cls = data.targets()[i];
    sum[cls] += data.at(i, feature);
    ++count[cls];
  }
  const double mean0 = sum[0] / static_cast<double>(count[0]);
  const double mean1 = sum[1] / static_cast<double>(count[1]);
  const double grand = (sum[0] + sum[1]) / static_cast<double>(n);

  double ssw = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double mean = data.targets()[i] == 1 ? mean1 : mean0;
    const double d = data.at(i, feature) - mean;
    ssw += d * d;
  }
  double ssb = static_cast<double>(count[0]) * (mean0 - grand) * (mean0 - grand) +
               static_cast<double>(count[1]) * (mean1 - grand) * (mean1 - grand);

  if (ssb == 0.0) return 0.0;
  if (ssw == 0.0) return std::numeric_limits<double>::infinity();
  // G = 2 groups: df_between = 1, df_within = n - 2.
  return ssb * static_cast<double>(n - 2) / ssw;
}

ImportanceProfile global_importance(const Dataset& data, double smoothing) {
  const std::size_t p = data.cols();
  ImportanceProfile profile;
  profile.f_values.assign(p, 0.0);

  double max_finite = 0.0;
  bool any_infinite = false;
  for (std::size_t j = 0; j < p; ++j) {
    if (!data.spec(j).is_mutable) continue;
    const double f = anova_f(data, j);
    profile.f_values[j] = f;
    if (std::isinf(f))
      any_infinite = true;
    else
      max_finite = std::max(max_finite, f);
  }
  if (any_infinite) {
    for (std::size_t j = 0; j < p; ++j)
      if (std::isinf(profile.f_values[j])) profile.f_values[j] = max_finite;
  }

  profile.theta_global =
      importance_to_theta(profile.f_values, data.specs(), smoothing);
  return profile;
}

WeightVector global_theta(const Dataset& data, double smoothing) {
  return global_importance(data, smoothing).theta_global;
}

KnnProfile knn_profile(const Dataset& data, std::span<const double> x,
                       int desired_class, std::size_t k, double smoothing) {
  if (k < 1) throw std::invalid_argument("knn_profile: k must be >= 1");
  if (x.size() != data.cols())
    throw std::invalid_argument("knn_profile: length mismatch");

  const std::vector<std::size_t> pool = data.rows_with_class(desired_class);
  if (pool.size() < k)
    throw std::invalid_argument("knn_profile: fewer than k records of the desired class");

  const MadMetric metric(data.specs());
  std::vector<std::pair<double, std::size_t>> dist;
  dist.reserve(pool.size());
  for (std::size_t i : pool) dist.emplace_back(metric(x, data.row(i)), i);
  // Ascending by distance, ties by row index.
  std::sort(dist.begin(), dist.end());

  KnnProfile profile;
  profile.neighbors.reserve(k);
  profile.delta.assign(data.cols(), 0.0);
  for (std::size_t r = 0; r < k; ++r) {
    const std::size_t i = dist[r].second;
    profile.neighbors.push_back(i);
    auto row = data.row(i);
    auto inv_mad = metric.inv_mad();
    for (std::size_t j = 0; j < data.cols(); ++j)
      profile.delta[j] += std::abs(x[j] - row[j]) * inv_mad[j];
  }
  for (double& d : profile.delta) d /= static_cast<double>(k);

  profile.theta = importance_to_theta(profile.delta, data.specs(), smoothing);
  return profile;
}

WeightVector knn_theta(const Dataset& data, std::span<const double> x,
                       int desired_class, std::size_t k, double smoothing) {
  return knn_profile(data, x, desired_class, k, smoothing).theta;
}

}  // namespace cfx
