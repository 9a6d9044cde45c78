#include "cfx/distance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cfx/kernels.hpp"

namespace cfx {

namespace {

void check_inputs(std::span<const double> x, std::span<const double> x_prime,
                  std::size_t p) {
  if (x.size() != p || x_prime.size() != p)
    throw std::invalid_argument("distance: length mismatch");
  for (std::size_t j = 0; j < p; ++j)
    if (!std::isfinite(x[j]) || !std::isfinite(x_prime[j]))
      throw std::invalid_argument("distance: non-finite input");
}

}  // namespace

WeightVector WeightVector::uniform(std::span<const FeatureSpec> specs) {
  WeightVector w;
  w.theta.resize(specs.size());
  for (std::size_t j = 0; j < specs.size(); ++j)
    w.theta[j] = specs[j].is_mutable ? 1.0 : 0.0;
  return w;
}

WeightVector WeightVector::from_raw(std::vector<double> raw,
                                    std::span<const FeatureSpec> specs) {
  if (raw.size() != specs.size())
    throw std::invalid_argument("WeightVector: length mismatch");
  double sum = 0.0;
  std::size_t n_mut = 0;
  for (std::size_t j = 0; j < specs.size(); ++j) {
    if (!specs[j].is_mutable) {
      raw[j] = 0.0;
      continue;
    }
    if (!std::isfinite(raw[j]) || raw[j] < 0.0)
      throw std::invalid_argument("WeightVector: entries must be finite and >= 0");
    sum += raw[j];
    ++n_mut;
  }
  if (n_mut == 0) throw std::invalid_argument("WeightVector: no mutable features");
  if (sum <= 0.0)
    throw std::invalid_argument("WeightVector: all mutable entries are zero");
  const double factor = static_cast<double>(n_mut) / sum;
  for (std::size_t j = 0; j < specs.size(); ++j)
    if (specs[j].is_mutable) raw[j] *= factor;
  WeightVector w;
  w.theta = std::move(raw);
  return w;
}

void WeightVector::validate(std::span<const FeatureSpec> specs) const {
  if (theta.size() != specs.size())
    throw std::invalid_argument("WeightVector: length mismatch");
  double sum = 0.0;
  std::size_t n_mut = 0;
  for (std::size_t j = 0; j < specs.size(); ++j) {
    if (!std::isfinite(theta[j]) || theta[j] < 0.0)
      throw std::invalid_argument("WeightVector: entries must be finite and >= 0");
    if (!specs[j].is_mutable) {
      if (theta[j] != 0.0)
        throw std::invalid_argument("WeightVector: nonzero weight on immutable feature");
      continue;
    }
    sum += theta[j];
    ++n_mut;
  }
  if (n_mut == 0) throw std::invalid_argument("WeightVector: no mutable features");
  if (std::abs(sum / static_cast<double>(n_mut) - 1.0) > 1e-9)
    throw std::invalid_argument("WeightVector: mean over mutable features must be 1");
}

MadMetric::MadMetric(std::span<const FeatureSpec> specs) {
  inv_mad_.resize(specs.size());
  for (std::size_t j = 0; j < specs.size(); ++j) {
    const FeatureSpec& s = specs[j];
    if (s.is_mutable) {
      if (!(s.mad > 0.0))
        throw std::invalid_argument("MadMetric: mutable feature '" + s.name +
                                    "' has non-positive MAD");
      inv_mad_[j] = 1.0 / s.mad;
    } else {
      inv_mad_[j] = 0.0;
    }
  }
}

double MadMetric::operator()(std::span<const double> x,
                             std::span<const double> x_prime) const {
  return kernels::scaled_l1(x.data(), x_prime.data(), inv_mad_.data(),
                            inv_mad_.size());
}

double MadMetric::weighted(std::span<const double> x,
                           std::span<const double> x_prime,
                           std::span<const double> theta) const {
  return kernels::weighted_scaled_l1(x.data(), x_prime.data(), inv_mad_.data(),
                                     theta.data(), inv_mad_.size());
}

double mad_distance(std::span<const double> x, std::span<const double> x_prime,
                    std::span<const FeatureSpec> specs) {
  check_inputs(x, x_prime, specs.size());
  MadMetric metric(specs);
  return metric(x, x_prime);
}

double weighted_distance(std::span<const double> x,
                         std::span<const double> x_prime,
                         std::span<const FeatureSpec> specs,
                         const WeightVector& theta) {
  check_inputs(x, x_prime, specs.size());
  if (theta.theta.size() != specs.size())
    throw std::invalid_argument("weighted_distance: theta length mismatch");
  MadMetric metric(specs);
  return metric.weighted(x, x_prime, theta.theta);
}

double change_threshold(const FeatureSpec& spec) {
  return std::max(1e-3 * spec.mad, 1e-9);
}

std::size_t changed_feature_count(std::span<const double> deltas,
                                  std::span<const FeatureSpec> specs) {
  if (deltas.size() != specs.size())
    throw std::invalid_argument("changed_feature_count: length mismatch");
  std::size_t count = 0;
  for (std::size_t j = 0; j < specs.size(); ++j)
    if (std::abs(deltas[j]) > change_threshold(specs[j])) ++count;
  return count;
}

}  // namespace cfx
