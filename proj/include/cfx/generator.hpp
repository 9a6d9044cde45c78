#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "cfx/dataset.hpp"
#include "cfx/distance.hpp"
#include "cfx/models.hpp"
#include "cfx/optimizer.hpp"

namespace cfx {

enum class CfKind { negative, positive, custom };

// Simplex options used inside the counterfactual search: the vertex spread
// is MAD-relative (the steps are the per-feature MADs), and 1e-4 MADs sits
// below the counterfactual-size change threshold of 1e-3 MADs.
inline NelderMeadOptions search_simplex_options() {
  NelderMeadOptions nm;
  nm.f_tol = 1e-5;
  nm.x_tol = 1e-4;
  nm.max_restarts = 1;
  return nm;
}

struct CfConfig {
  // Tolerance on |score(x') - y_target|; a result inside it is valid.
  double epsilon = 0.05;
  double lambda_init = 0.0;
  // Additive lambda step.
  double alpha = 0.5;
  double lambda_max = 1e4;
  int restarts = 5;
  // Distance weights; absent means the plain MAD metric.
  std::optional<WeightVector> theta;
  std::uint64_t seed = 0;
  // Offset past the decision boundary for negative counterfactuals so the
  // flipped class is actually reached; < 0 means "use epsilon".
  double boundary_margin = -1.0;
  // Initial simplex step, in units of each feature's MAD.
  double simplex_scale = 1.0;
  NelderMeadOptions nm = search_simplex_options();

  void validate() const;
};

struct CounterfactualResult {
  CfKind kind = CfKind::custom;
  std::vector<double> x_original;
  std::vector<double> x_cf;
  std::vector<double> deltas;  // x_cf - x_original; zero on immutable features
  double y_target = 0.0;
  double y_achieved = 0.0;
  double distance = 0.0;  // under the metric used for the search
  double lambda_final = 0.0;
  std::size_t size = 0;  // changed features above the per-feature threshold
  bool valid = false;
  // One (lambda, achieved score) pair per optimisation pass of the winning
  // restart; lambda is non-decreasing along the trace.
  std::vector<std::pair<double, double>> trace;
  int iterations = 0;  // total simplex iterations across all restarts
};

// Eq-style counterfactual loss: lambda * (score(x') - y_target)^2 + d(x, x'),
// with d the MAD metric or its theta-weighted variant.
double cf_loss(std::span<const double> x, std::span<const double> x_prime,
               double y_target, double lambda, const Predictor& model,
               std::span<const FeatureSpec> specs,
               const WeightVector* theta = nullptr);

// Counterfactual search: per restart, start from a random training record of
// the desired class, minimise the loss with Nelder-Mead, and escalate lambda
// additively until the tolerance holds or lambda_max is exceeded. Across
// restarts the valid result with the smallest distance wins; if none is
// valid, the best-effort result closest to the target is returned with
// valid = false. Deterministic for a fixed seed.
CounterfactualResult generate(std::span<const double> x, double y_target,
                              const Predictor& model, const Dataset& data,
                              const CfConfig& cfg,
                              CfKind kind = CfKind::custom);

// Counterfactual for a rejected instance: target 0.5 + margin, so a valid
// result lands on the accepted side of the boundary.
CounterfactualResult generate_negative(std::span<const double> x,
                                       const Predictor& model,
                                       const Dataset& data,
                                       const CfConfig& cfg);

// Safety margin for an accepted instance: target exactly the decision
// boundary P(y=1) = 0.5.
CounterfactualResult generate_positive(std::span<const double> x,
                                       const Predictor& model,
                                       const Dataset& data,
                                       const CfConfig& cfg);

}  // namespace cfx
