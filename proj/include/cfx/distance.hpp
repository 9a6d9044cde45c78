#pragma once

#include <span>
#include <vector>

#include "cfx/dataset.hpp"

namespace cfx {

// Per-feature multipliers on the distance terms. Entries are nonnegative,
// zero on immutable features, and average to 1 over the mutable ones.
struct WeightVector {
  std::vector<double> theta;

  // All ones on mutable features, zero on immutable ones.
  static WeightVector uniform(std::span<const FeatureSpec> specs);

  // Zeroes immutable entries and rescales the mutable ones to mean 1.
  static WeightVector from_raw(std::vector<double> raw,
                               std::span<const FeatureSpec> specs);

  void validate(std::span<const FeatureSpec> specs) const;
};

// MAD-normalised Manhattan metric with the per-feature reciprocal scales
// precomputed once. Immutable features get scale 0 so they never contribute.
// This is the hot-path form used by the generator and the KNN scans.
class MadMetric {
 public:
  explicit MadMetric(std::span<const FeatureSpec> specs);

  std::size_t size() const noexcept { return inv_mad_.size(); }
  std::span<const double> inv_mad() const noexcept { return inv_mad_; }

  double operator()(std::span<const double> x,
                    std::span<const double> x_prime) const;
  double weighted(std::span<const double> x, std::span<const double> x_prime,
                  std::span<const double> theta) const;

 private:
  std::vector<double> inv_mad_;
};

// Sum over features of |x_j - x'_j| / MAD_j. Immutable features contribute
// zero. Validates lengths and finiteness; use MadMetric in inner loops.
double mad_distance(std::span<const double> x, std::span<const double> x_prime,
                    std::span<const FeatureSpec> specs);

// Each term of mad_distance multiplied by theta_j. Reduces to mad_distance
// bitwise when theta is all ones.
double weighted_distance(std::span<const double> x,
                         std::span<const double> x_prime,
                         std::span<const FeatureSpec> specs,
                         const WeightVector& theta);

// Threshold below which a per-feature change does not count as a change:
// max(1e-3 * MAD_j, 1e-9).
double change_threshold(const FeatureSpec& spec);

// Number of entries of `deltas` exceeding their feature's change threshold.
std::size_t changed_feature_count(std::span<const double> deltas,
                                  std::span<const FeatureSpec> specs);

}  // namespace cfx
