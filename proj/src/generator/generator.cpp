#include "cfx/generator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace cfx {

namespace {

void check_in_bounds(std::span<const double> x,
                     std::span<const FeatureSpec> specs, const char* what) {
  if (x.size() != specs.size())
    throw std::invalid_argument(std::string(what) + ": length mismatch");
  for (std::size_t j = 0; j < specs.size(); ++j) {
    if (!std::isfinite(x[j]))
      throw std::invalid_argument(std::string(what) + ": non-finite input");
    if (x[j] < specs[j].lower || x[j] > specs[j].upper)
      throw std::invalid_argument(std::string(what) + ": feature '" +
                                  specs[j].name + "' outside bounds");
  }
}

double checked_score(const Predictor& model, std::span<const double> x) {
  const double s = model.score(x);
  if (!std::isfinite(s))
    throw std::runtime_error("generate: model returned a non-finite score");
  return s;
}

struct SearchContext {
  const Predictor& model;
  const MadMetric& metric;
  std::span<const double> x;
  const double* theta;  // null for the unweighted metric
  double y_target;

  double distance(std::span<const double> x_prime) const {
    return theta ? metric.weighted(x, x_prime,
                                   {theta, metric.size()})
                 : metric(x, x_prime);
  }
  double loss(std::span<const double> x_prime, double lambda) const {
    const double gap = checked_score(model, x_prime) - y_target;
    return lambda * gap * gap + distance(x_prime);
  }
};

CounterfactualResult finish_result(
    CfKind kind, std::span<const double> x, std::vector<double> x_cf,
    double y_target, double y_achieved, double dist, double lambda,
    bool valid, std::vector<std::pair<double, double>> trace, int iterations,
    std::span<const FeatureSpec> specs) {
  CounterfactualResult r;
  r.kind = kind;
  r.x_original.assign(x.begin(), x.end());
  r.x_cf = std::move(x_cf);
  r.deltas.resize(r.x_cf.size());
  for (std::size_t j = 0; j < r.x_cf.size(); ++j)
    r.deltas[j] = r.x_cf[j] - r.x_original[j];
  r.y_target = y_target;
  r.y_achieved = y_achieved;
  r.distance = dist;
  r.lambda_final = lambda;
  r.size = changed_feature_count(r.deltas, specs);
  r.valid = valid;
  r.trace = std::move(trace);
  r.iterations = iterations;
  return r;
}

}  // namespace

void CfConfig::validate() const {
  if (!(epsilon > 0.0) || epsilon >= 0.5)
    throw std::invalid_argument("CfConfig: epsilon must be in (0, 0.5)");
  if (lambda_init < 0.0)
    throw std::invalid_argument("CfConfig: lambda_init must be >= 0");
  if (!(alpha > 0.0)) throw std::invalid_argument("CfConfig: alpha must be > 0");
  if (!(lambda_max > lambda_init))
    throw std::invalid_argument("CfConfig: lambda_max must exceed lambda_init");
  if (restarts < 1) throw std::invalid_argument("CfConfig: restarts must be >= 1");
}

double cf_loss(std::span<const double> x, std::span<const double> x_prime,
               double y_target, double lambda, const Predictor& model,
               std::span<const FeatureSpec> specs, const WeightVector* theta) {
  check_in_bounds(x, specs, "cf_loss(x)");
  check_in_bounds(x_prime, specs, "cf_loss(x')");
  const MadMetric metric(specs);
  SearchContext ctx{model, metric, x,
                    theta ? theta->theta.data() : nullptr, y_target};
  return ctx.loss(x_prime, lambda);
}

CounterfactualResult generate(std::span<const double> x, double y_target,
                              const Predictor& model, const Dataset& data,
                              const CfConfig& cfg, CfKind kind) {
  cfg.validate();
  const auto specs = data.specs();
  check_in_bounds(x, specs, "generate");
  if (y_target < cfg.epsilon || y_target > 1.0 - cfg.epsilon)
    throw std::invalid_argument("generate: y_target must lie in [eps, 1-eps]");
  if (cfg.theta) cfg.theta->validate(specs);

  const MadMetric metric(specs);
  SearchContext ctx{model, metric, x,
                    cfg.theta ? cfg.theta->theta.data() : nullptr, y_target};

  // Vacuous counterfactual: x already meets the tolerance.
  const double score_x = checked_score(model, x);
  if (std::abs(score_x - y_target) <= cfg.epsilon) {
    return finish_result(kind, x, {x.begin(), x.end()}, y_target, score_x, 0.0,
                         cfg.lambda_init, true,
                         {{cfg.lambda_init, score_x}}, 0, specs);
  }

  // Search space: bounds, frozen dimensions, per-feature simplex steps.
  const std::size_t p = specs.size();
  std::vector<double> lower(p), upper(p), steps(p);
  std::vector<bool> frozen(p);
  std::size_t n_free = 0;
  for (std::size_t j = 0; j < p; ++j) {
    lower[j] = specs[j].lower;
    upper[j] = specs[j].upper;
    frozen[j] = !specs[j].is_mutable || specs[j].upper <= specs[j].lower;
    steps[j] = specs[j].mad;
    if (!frozen[j]) ++n_free;
  }
  if (n_free == 0)
    throw std::invalid_argument("generate: no mutable features to search over");

  // Initial points come from training records of the desired class; for a
  // boundary target that is the class opposite to the model's current call.
  int desired_class;
  if (y_target > 0.5)
    desired_class = 1;
  else if (y_target < 0.5)
    desired_class = 0;
  else
    desired_class = 1 - model.classify(x);
  const std::vector<std::size_t> pool = data.rows_with_class(desired_class);
  if (pool.empty())
    throw std::runtime_error("generate: no training records of the desired class");

  NelderMeadOptions nm = cfg.nm;
  nm.steps.assign(steps.begin(), steps.end());
  nm.scale = cfg.simplex_scale;

  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);

  struct Candidate {
    std::vector<double> x_cf;
    double score = 0.0;
    double dist = 0.0;
    double lambda = 0.0;
    bool valid = false;
    std::vector<std::pair<double, double>> trace;
  };
  std::optional<Candidate> best_valid;
  std::optional<Candidate> best_invalid;
  int total_iterations = 0;
  // Later restarts start from the lambda the first restart ended on instead
  // of re-running the whole escalation: at a calibrated lambda, a fresh
  // desired-class record keeps its score pinned near the target while the
  // distance term shrinks.
  std::optional<double> lambda_warm;

  // Escalation stagnation guard: when this many consecutive lambda steps
  // bring no measurable score progress (after a minimum number of steps),
  // the restart is stuck in a kink of the distance term and further
  // escalation cannot move it.
  constexpr int kStuckMinSteps = 60;
  constexpr int kStuckWindow = 40;
  constexpr double kStuckTol = 1e-4;

  for (int restart = 0; restart < cfg.restarts; ++restart) {
    auto seed_row = data.row(pool[pick(rng)]);
    std::vector<double> current(seed_row.begin(), seed_row.end());
    for (std::size_t j = 0; j < p; ++j) {
      if (frozen[j])
        current[j] = x[j];
      else
        current[j] = std::clamp(current[j], lower[j], upper[j]);
    }

    double lambda = lambda_warm.value_or(cfg.lambda_init);
    Candidate cand;
    double best_gap = std::numeric_limits<double>::infinity();
    int steps = 0, no_progress = 0;
    while (true) {
      const Objective objective = [&](std::span<const double> xp) {
        return ctx.loss(xp, lambda);
      };
      OptimResult opt = nelder_mead(objective, current, lower, upper, frozen, nm);
      total_iterations += opt.iterations;
      current = std::move(opt.x_opt);

      const double achieved = checked_score(model, current);
      cand.trace.emplace_back(lambda, achieved);
      cand.x_cf = current;
      cand.score = achieved;
      cand.lambda = lambda;
      cand.valid = std::abs(achieved - y_target) <= cfg.epsilon;
      if (cand.valid) break;

      ++steps;
      const double gap = std::abs(achieved - y_target);
      if (gap < best_gap - kStuckTol) {
        best_gap = gap;
        no_progress = 0;
      } else if (++no_progress >= kStuckWindow && steps >= kStuckMinSteps) {
        break;
      }
      lambda += cfg.alpha;
      if (lambda > cfg.lambda_max) break;
    }
    cand.dist = ctx.distance(cand.x_cf);
    if (restart == 0) lambda_warm = cand.lambda;

    if (cand.valid) {
      lambda_warm = cand.lambda;
      if (!best_valid || cand.dist < best_valid->dist) best_valid = std::move(cand);
    } else if (!best_valid) {
      const double gap = std::abs(cand.score - y_target);
      if (!best_invalid ||
          gap < std::abs(best_invalid->score - y_target))
        best_invalid = std::move(cand);
    }
  }

  Candidate& won = best_valid ? *best_valid : *best_invalid;
  return finish_result(kind, x, std::move(won.x_cf), y_target, won.score,
                       won.dist, won.lambda, won.valid, std::move(won.trace),
                       total_iterations, specs);
}

CounterfactualResult generate_negative(std::span<const double> x,
                                       const Predictor& model,
                                       const Dataset& data,
                                       const CfConfig& cfg) {
  cfg.validate();
  if (model.classify(x) != 0)
    throw std::invalid_argument(
        "generate_negative: instance is already classified as accepted");
  const double margin =
      cfg.boundary_margin >= 0.0 ? cfg.boundary_margin : cfg.epsilon;
  return generate(x, 0.5 + margin, model, data, cfg, CfKind::negative);
}

CounterfactualResult generate_positive(std::span<const double> x,
                                       const Predictor& model,
                                       const Dataset& data,
                                       const CfConfig& cfg) {
  cfg.validate();
  if (model.classify(x) != 1)
    throw std::invalid_argument(
        "generate_positive: instance is classified as rejected");
  return generate(x, 0.5, model, data, cfg, CfKind::positive);
}

}  // namespace cfx
