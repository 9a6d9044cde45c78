#include "cfx/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cfx {

namespace {

constexpr double kReflect = 1.0;
constexpr double kExpand = 2.0;
constexpr double kContract = 0.5;
constexpr double kShrink = 0.5;

void validate_box(std::span<const double> x0, std::span<const double> lower,
                  std::span<const double> upper,
                  const std::vector<bool>& frozen) {
  const std::size_t d = x0.size();
  if (lower.size() != d || upper.size() != d || frozen.size() != d)
    throw std::invalid_argument("nelder_mead: dimension mismatch");
  for (std::size_t j = 0; j < d; ++j) {
    if (!std::isfinite(lower[j]) || !std::isfinite(upper[j]) ||
        lower[j] > upper[j])
      throw std::invalid_argument("nelder_mead: invalid bounds");
    if (x0[j] < lower[j] || x0[j] > upper[j])
      throw std::invalid_argument("nelder_mead: x0 outside bounds");
  }
}

std::vector<std::size_t> free_dims(const std::vector<bool>& frozen) {
  std::vector<std::size_t> free;
  for (std::size_t j = 0; j < frozen.size(); ++j)
    if (!frozen[j]) free.push_back(j);
  return free;
}

struct RunResult {
  std::vector<double> x;
  double f = 0.0;
  int iterations = 0;
  bool converged = false;  // stopped on the spread tolerances
};

// Per-dimension simplex steps, also the scale for the vertex-spread check.
std::vector<double> effective_steps(std::span<const double> lower,
                                    std::span<const double> upper,
                                    std::span<const double> steps) {
  std::vector<double> out(lower.size());
  for (std::size_t j = 0; j < lower.size(); ++j) {
    double s = steps.empty() ? 0.05 * (upper[j] - lower[j]) : steps[j];
    if (!(s > 0.0)) s = 0.05 * (upper[j] - lower[j]);
    out[j] = s > 0.0 ? s : 1.0;
  }
  return out;
}

// One simplex descent from `anchor` until the spread tolerances hold or the
// iteration budget runs out.
RunResult single_run(const Objective& objective, const std::vector<double>& anchor,
                     double anchor_value, std::span<const double> lower,
                     std::span<const double> upper,
                     const std::vector<double>& step_scale,
                     const std::vector<std::size_t>& free,
                     const std::vector<bool>& frozen,
                     const NelderMeadOptions& opts, double scale, int budget,
                     int iteration_offset) {
  const std::size_t nf = free.size();

  SimplexState simplex =
      initial_simplex(anchor, lower, upper, opts.steps, scale, frozen);
  simplex.values[0] = anchor_value;
  for (std::size_t i = 1; i < simplex.vertices.size(); ++i)
    simplex.values[i] = objective(simplex.vertices[i]);

  std::vector<std::size_t> rank(simplex.vertices.size());
  auto sort_rank = [&]() {
    std::iota(rank.begin(), rank.end(), std::size_t{0});
    std::stable_sort(rank.begin(), rank.end(),
                     [&](std::size_t a, std::size_t b) {
                       return simplex.values[a] < simplex.values[b];
                     });
  };
  sort_rank();

  std::vector<double> centroid(anchor.size()), trial(anchor), second(anchor);
  auto project = [&](std::vector<double>& v) {
    for (std::size_t j : free) v[j] = std::clamp(v[j], lower[j], upper[j]);
  };

  RunResult out;

  while (out.iterations < budget) {
    ++out.iterations;
    const std::size_t worst = rank[nf];
    const std::size_t second_worst = rank[nf - 1];
    const std::size_t best = rank[0];

    // Both spreads must collapse; either alone can hold while the simplex is
    // still far from stationary. The vertex spread is measured relative to
    // the per-dimension steps and only computed once the cheap value-spread
    // test passes.
    const double f_spread = simplex.values[worst] - simplex.values[best];
    if (f_spread < opts.f_tol) {
      double x_spread = 0.0;
      for (std::size_t i = 1; i <= nf; ++i)
        for (std::size_t j : free)
          x_spread = std::max(x_spread,
                              std::abs(simplex.vertices[rank[i]][j] -
                                       simplex.vertices[best][j]) /
                                  step_scale[j]);
      if (x_spread < opts.x_tol) {
        out.converged = true;
        break;
      }
    }

    for (std::size_t j : free) {
      double c = 0.0;
      for (std::size_t i = 0; i <= nf; ++i)
        if (rank[i] != worst) c += simplex.vertices[rank[i]][j];
      centroid[j] = c / static_cast<double>(nf);
    }

    auto move_from_centroid = [&](std::vector<double>& v, double coeff) {
      for (std::size_t j = 0; j < anchor.size(); ++j)
        v[j] = simplex.vertices[best][j];
      for (std::size_t j : free)
        v[j] = centroid[j] + coeff * (centroid[j] - simplex.vertices[worst][j]);
      project(v);
    };

    move_from_centroid(trial, kReflect);
    const double f_reflect = objective(trial);

    if (f_reflect < simplex.values[best]) {
      move_from_centroid(second, kExpand);
      const double f_expand = objective(second);
      if (f_expand < f_reflect) {
        simplex.vertices[worst] = second;
        simplex.values[worst] = f_expand;
      } else {
        simplex.vertices[worst] = trial;
        simplex.values[worst] = f_reflect;
      }
    } else if (f_reflect < simplex.values[second_worst]) {
      simplex.vertices[worst] = trial;
      simplex.values[worst] = f_reflect;
    } else {
      bool shrink = false;
      if (f_reflect < simplex.values[worst]) {
        move_from_centroid(second, kContract);  // outside contraction
        const double f_contract = objective(second);
        if (f_contract <= f_reflect) {
          simplex.vertices[worst] = second;
          simplex.values[worst] = f_contract;
        } else {
          shrink = true;
        }
      } else {
        move_from_centroid(second, -kContract);  // inside contraction
        const double f_contract = objective(second);
        if (f_contract < simplex.values[worst]) {
          simplex.vertices[worst] = second;
          simplex.values[worst] = f_contract;
        } else {
          shrink = true;
        }
      }
      if (shrink) {
        for (std::size_t i = 1; i <= nf; ++i) {
          std::vector<double>& v = simplex.vertices[rank[i]];
          for (std::size_t j : free)
            v[j] = simplex.vertices[rank[0]][j] +
                   kShrink * (v[j] - simplex.vertices[rank[0]][j]);
          simplex.values[rank[i]] = objective(v);
        }
      }
    }

    sort_rank();
    if (opts.on_iteration)
      opts.on_iteration(iteration_offset + out.iterations,
                        simplex.values[rank[0]]);
  }

  out.x = simplex.vertices[rank[0]];
  out.f = simplex.values[rank[0]];
  return out;
}

}  // namespace

SimplexState initial_simplex(std::span<const double> x0,
                             std::span<const double> lower,
                             std::span<const double> upper,
                             std::span<const double> steps, double scale,
                             const std::vector<bool>& frozen) {
  validate_box(x0, lower, upper, frozen);
  const std::size_t d = x0.size();
  if (!steps.empty() && steps.size() != d)
    throw std::invalid_argument("initial_simplex: steps length mismatch");

  const std::vector<std::size_t> free = free_dims(frozen);
  if (free.empty())
    throw std::invalid_argument("initial_simplex: all dimensions frozen");

  SimplexState s;
  s.vertices.reserve(free.size() + 1);
  s.vertices.emplace_back(x0.begin(), x0.end());

  for (std::size_t j : free) {
    const double width = upper[j] - lower[j];
    if (width <= 0.0)
      throw std::invalid_argument(
          "initial_simplex: zero feasible width in unfrozen dimension");
    double step = steps.empty() ? 0.05 * width : steps[j];
    if (!(step > 0.0)) step = 0.05 * width;
    step *= scale;

    std::vector<double> v(x0.begin(), x0.end());
    v[j] = std::clamp(x0[j] + step, lower[j], upper[j]);
    if (v[j] == x0[j]) v[j] = std::clamp(x0[j] - step, lower[j], upper[j]);
    s.vertices.push_back(std::move(v));
  }
  s.values.assign(s.vertices.size(), 0.0);
  return s;
}

OptimResult nelder_mead(const Objective& objective, std::span<const double> x0,
                        std::span<const double> lower,
                        std::span<const double> upper,
                        const std::vector<bool>& frozen,
                        const NelderMeadOptions& opts) {
  validate_box(x0, lower, upper, frozen);
  const std::vector<std::size_t> free = free_dims(frozen);
  if (free.empty())
    throw std::invalid_argument("nelder_mead: all dimensions frozen");
  const int budget =
      opts.max_iter > 0 ? opts.max_iter : 200 * static_cast<int>(free.size());

  std::vector<double> anchor(x0.begin(), x0.end());
  double anchor_value = objective(anchor);
  if (!std::isfinite(anchor_value))
    throw std::invalid_argument("nelder_mead: objective not finite at x0");

  const std::vector<double> step_scale = effective_steps(lower, upper, opts.steps);

  OptimResult result;
  double scale = opts.scale;
  for (int run = 0; run <= opts.max_restarts; ++run) {
    RunResult r = single_run(objective, anchor, anchor_value, lower, upper,
                             step_scale, free, frozen, opts, scale, budget,
                             result.iterations);
    result.iterations += r.iterations;
    result.converged = r.converged;
    const bool improved = anchor_value - r.f > opts.f_tol;
    if (r.f < anchor_value) {
      anchor = std::move(r.x);
      anchor_value = r.f;
    }
    // A re-run that no longer improves is as polished as this simplex will
    // get.
    if (run > 0 && !improved) break;
    scale *= 0.5;
  }

  result.x_opt = std::move(anchor);
  result.f_opt = anchor_value;
  return result;
}

}  // namespace cfx
