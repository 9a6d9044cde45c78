#pragma once

#include <functional>
#include <span>
#include <vector>

namespace cfx {

using Objective = std::function<double(std::span<const double>)>;

struct NelderMeadOptions {
  double f_tol = 1e-7;
  // Vertex spread tolerance, measured relative to the per-dimension steps.
  double x_tol = 1e-7;
  // 0 means 200 * number of free dimensions.
  int max_iter = 0;
  // Initial simplex steps per dimension (the counterfactual generator passes
  // the per-feature MADs). Empty means 5% of the box width per dimension.
  std::vector<double> steps;
  double scale = 1.0;
  // After a run ends (spread tolerances met or budget exhausted) the simplex
  // is rebuilt around the best vertex at half scale, at most this many
  // times; a re-run that no longer improves stops early.
  int max_restarts = 2;
  // Optional per-iteration observer (iteration index, best value).
  std::function<void(int, double)> on_iteration;
};

struct SimplexState {
  // n_free + 1 full-dimension vertices; frozen coordinates equal x0's.
  std::vector<std::vector<double>> vertices;
  std::vector<double> values;
  int iterations = 0;
};

struct OptimResult {
  std::vector<double> x_opt;
  double f_opt = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Builds the start simplex: vertex 0 is x0 and vertex j steps along free
// dimension j by scale*steps[j], clamped into the box; when clamping would
// collapse the vertex onto x0 the step is taken in the negative direction.
// Throws if a free dimension has zero feasible width or all dimensions are
// frozen.
SimplexState initial_simplex(std::span<const double> x0,
                             std::span<const double> lower,
                             std::span<const double> upper,
                             std::span<const double> steps, double scale,
                             const std::vector<bool>& frozen);

// Downhill simplex minimisation with standard coefficients (reflection 1,
// expansion 2, contraction 0.5, shrink 0.5) over the free dimensions of a
// box. Trial points are projected onto the box before evaluation; frozen
// dimensions never move. A run stops once the simplex value spread is below
// f_tol and the vertex spread below x_tol, or when the per-run iteration cap
// is reached. Deterministic.
OptimResult nelder_mead(const Objective& objective, std::span<const double> x0,
                        std::span<const double> lower,
                        std::span<const double> upper,
                        const std::vector<bool>& frozen,
                        const NelderMeadOptions& opts = {});

}  // namespace cfx
