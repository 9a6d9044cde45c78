#pragma once

#include <cstdint>

#include "cfx/dataset.hpp"

namespace cfx {

struct SyntheticOptions {
  // Number of class-informative features; 0 picks clamp(p/5, 2, p).
  std::size_t informative = 0;
  // Distance between the two class means on informative features, in units
  // of the per-class standard deviation.
  double separation = 2.0;
};

// Desk-scale stand-in for a credit dataset: two Gaussian clusters with
// class-dependent means on the informative features, uniform noise on the
// rest, a per-feature affine rescaling so columns come in different units,
// and exactly alternating class labels. Deterministic for a fixed seed.
Dataset gen_synthetic(std::size_t n, std::size_t p, std::uint64_t seed,
                      const SyntheticOptions& opts = {});

}  // namespace cfx
