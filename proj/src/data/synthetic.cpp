#include "cfx/synthetic.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <string>

namespace cfx {

Dataset gen_synthetic(std::size_t n, std::size_t p, std::uint64_t seed,
                      const SyntheticOptions& opts) {
  if (n < 100) throw std::invalid_argument("gen_synthetic: n must be >= 100");
  if (p < 2) throw std::invalid_argument("gen_synthetic: p must be >= 2");

  std::size_t informative = opts.informative;
  if (informative == 0) informative = std::clamp<std::size_t>(p / 5, 2, p);
  informative = std::min(informative, p);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> scale_dist(0.5, 2.5);
  std::uniform_real_distribution<double> offset_dist(-2.0, 2.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> noise(-1.5, 1.5);

  // Per-feature affine transform drawn first so the row loop consumes the
  // stream in a fixed order.
  std::vector<double> scale(p), offset(p);
  for (std::size_t j = 0; j < p; ++j) {
    scale[j] = scale_dist(rng);
    offset[j] = offset_dist(rng);
  }

  const double half_sep = 0.5 * opts.separation;
  std::vector<double> values(n * p);
  std::vector<int> targets(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int cls = static_cast<int>(i % 2);
    targets[i] = cls;
    const double mean = cls == 1 ? half_sep : -half_sep;
    for (std::size_t j = 0; j < p; ++j) {
      double raw = j < informative ? mean + gauss(rng) : noise(rng);
      values[i * p + j] = offset[j] + scale[j] * raw;
    }
  }

  std::vector<FeatureSpec> specs(p);
  for (std::size_t j = 0; j < p; ++j) {
    specs[j].name = "f" + std::to_string(j);
    double lo = values[j], hi = values[j];
    for (std::size_t i = 0; i < n; ++i) {
      lo = std::min(lo, values[i * p + j]);
      hi = std::max(hi, values[i * p + j]);
    }
    specs[j].lower = lo;
    specs[j].upper = hi;
  }

  return Dataset(std::move(values), std::move(targets), std::move(specs));
}

}  // namespace cfx
