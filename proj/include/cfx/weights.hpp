#pragma once

#include <span>
#include <vector>

#include "cfx/dataset.hpp"
#include "cfx/distance.hpp"

namespace cfx {

// Smoothing constant of the importance-to-weight transform 1/(v + c). The
// transform is monotone decreasing, so discriminative (or historically
// variable) features end up cheap to change in the weighted distance.
inline constexpr double kThetaSmoothing = 0.1;

struct ImportanceProfile {
  // Per-feature one-way ANOVA F values; infinite values are mapped to the
  // largest finite F among mutable features before normalisation.
  std::vector<double> f_values;
  WeightVector theta_global;
};

// One-way F statistic of a feature against the binary target:
// between-class mean square / within-class mean square. Returns +infinity
// when the within-class variance is zero but the class means differ.
double anova_f(const Dataset& data, std::size_t feature);

ImportanceProfile global_importance(const Dataset& data,
                                    double smoothing = kThetaSmoothing);

// Global-importance weights: F values min-max normalised over mutable
// features, theta_j = 1/(F~_j + c), zero on immutable features, mean 1 over
// mutable ones.
WeightVector global_theta(const Dataset& data,
                          double smoothing = kThetaSmoothing);

struct KnnProfile {
  // The k nearest desired-class rows, ascending by distance (ties by row).
  std::vector<std::size_t> neighbors;
  // Mean MAD-normalised absolute change per feature between x and the
  // neighbours.
  std::vector<double> delta;
  WeightVector theta;
};

KnnProfile knn_profile(const Dataset& data, std::span<const double> x,
                       int desired_class, std::size_t k = 20,
                       double smoothing = kThetaSmoothing);

// Locally learned weights: features that the nearest desired-class
// neighbours changed a lot become cheap, untouched features expensive.
WeightVector knn_theta(const Dataset& data, std::span<const double> x,
                       int desired_class, std::size_t k = 20,
                       double smoothing = kThetaSmoothing);

}  // namespace cfx
