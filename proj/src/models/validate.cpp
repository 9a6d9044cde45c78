#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>

#include "cfx/models.hpp"

namespace cfx {

namespace {

Metrics metrics_over(const Predictor& model, const Dataset& data,
                     std::span<const std::size_t> rows) {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  for (std::size_t i : rows) {
    const int pred = model.classify(data.row(i));
    const int truth = data.targets()[i];
    if (pred == 1 && truth == 1)
      ++tp;
    else if (pred == 1 && truth == 0)
      ++fp;
    else if (pred == 0 && truth == 0)
      ++tn;
    else
      ++fn;
  }
  Metrics m;
  m.accuracy = static_cast<double>(tp + tn) / static_cast<double>(rows.size());
  const std::size_t denom = 2 * tp + fp + fn;
  m.f1 = denom == 0 ? 1.0 : 2.0 * static_cast<double>(tp) /
                                static_cast<double>(denom);
  return m;
}

}  // namespace

Metrics evaluate(const Predictor& model, const Dataset& data) {
  std::vector<std::size_t> rows(data.rows());
  std::iota(rows.begin(), rows.end(), 0);
  return metrics_over(model, data, rows);
}

Metrics evaluate(const Predictor& model, const Dataset& data,
                 std::span<const std::size_t> rows) {
  if (rows.empty()) throw std::invalid_argument("evaluate: empty row set");
  return metrics_over(model, data, rows);
}

std::unique_ptr<Predictor> train_model(const Dataset& data,
                                       const TrainConfig& cfg) {
  const auto seed = static_cast<std::uint64_t>(cfg.param("seed", 1));
  if (cfg.kind == "logreg") {
    LogRegConfig c;
    c.l2 = cfg.param("l2", c.l2);
    c.balanced = cfg.param("balanced", 1.0) != 0.0;
    c.tol = cfg.param("tol", c.tol);
    c.max_iter = static_cast<int>(cfg.param("max_iter", c.max_iter));
    c.seed = seed;
    return train_logreg(data, c);
  }
  if (cfg.kind == "mlp") {
    MlpConfig c;
    c.hidden_units = static_cast<int>(cfg.param("hidden_units", c.hidden_units));
    c.learning_rate = cfg.param("learning_rate", c.learning_rate);
    c.batch_size = static_cast<int>(cfg.param("batch_size", c.batch_size));
    c.epochs = static_cast<int>(cfg.param("epochs", c.epochs));
    c.momentum = cfg.param("momentum", c.momentum);
    c.l2 = cfg.param("l2", c.l2);
    c.tol = cfg.param("tol", c.tol);
    c.seed = seed;
    return train_mlp(data, c);
  }
  if (cfg.kind == "gradboost") {
    GradBoostConfig c;
    c.trees = static_cast<int>(cfg.param("trees", c.trees));
    c.depth = static_cast<int>(cfg.param("depth", c.depth));
    c.learning_rate = cfg.param("learning_rate", c.learning_rate);
    c.min_leaf = static_cast<int>(cfg.param("min_leaf", c.min_leaf));
    return train_gradboost(data, c);
  }
  if (cfg.kind == "linsvc") {
    LinearSvcConfig c;
    c.c = cfg.param("c", c.c);
    c.balanced = cfg.param("balanced", 1.0) != 0.0;
    c.tol = cfg.param("tol", c.tol);
    c.max_iter = static_cast<int>(cfg.param("max_iter", c.max_iter));
    c.seed = seed;
    return train_linear_svc(data, c);
  }
  throw std::invalid_argument("train_model: unknown kind '" + cfg.kind + "'");
}

TrainReport cross_validate(const Dataset& data, const Trainer& trainer, int k,
                           std::uint64_t seed,
                           std::map<std::string, double> hyperparams) {
  if (k < 2) throw std::invalid_argument("cross_validate: k must be >= 2");

  // Stratified fold assignment: shuffle each class and deal round-robin.
  std::vector<int> fold_of(data.rows(), -1);
  std::mt19937_64 rng(seed);
  for (int cls = 0; cls <= 1; ++cls) {
    std::vector<std::size_t> idx = data.rows_with_class(cls);
    std::shuffle(idx.begin(), idx.end(), rng);
    for (std::size_t i = 0; i < idx.size(); ++i)
      fold_of[idx[i]] = static_cast<int>(i % static_cast<std::size_t>(k));
  }

  double sum_f1 = 0.0, sum_acc = 0.0;
  for (int fold = 0; fold < k; ++fold) {
    std::vector<std::size_t> train_rows, test_rows;
    for (std::size_t i = 0; i < data.rows(); ++i) {
      if (fold_of[i] == fold)
        test_rows.push_back(i);
      else
        train_rows.push_back(i);
    }
    auto has_both = [&](const std::vector<std::size_t>& rows) {
      bool c0 = false, c1 = false;
      for (std::size_t i : rows) (data.targets()[i] == 1 ? c1 : c0) = true;
      return c0 && c1;
    };
    if (test_rows.empty() || !has_both(test_rows) || !has_both(train_rows))
      throw std::runtime_error("cross_validate: fold with a single class");

    Dataset train = subset(data, train_rows);
    std::unique_ptr<Predictor> model = trainer(train);
    const Metrics m = evaluate(*model, data, test_rows);
    sum_f1 += m.f1;
    sum_acc += m.accuracy;
  }

  TrainReport report;
  report.f1 = sum_f1 / static_cast<double>(k);
  report.accuracy = sum_acc / static_cast<double>(k);
  report.folds = k;
  report.hyperparams = std::move(hyperparams);
  return report;
}

TrainReport cross_validate(const Dataset& data, const TrainConfig& cfg, int k,
                           std::uint64_t seed) {
  return cross_validate(
      data, [&](const Dataset& train) { return train_model(train, cfg); }, k,
      seed, cfg.params);
}

std::pair<TrainConfig, TrainReport> grid_search(
    const Dataset& data, std::span<const TrainConfig> grid, int k,
    std::uint64_t seed) {
  if (grid.empty()) throw std::invalid_argument("grid_search: empty grid");
  std::size_t best = 0;
  TrainReport best_report;
  bool have_best = false;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    TrainReport report = cross_validate(data, grid[g], k, seed);
    const bool better =
        !have_best || report.f1 > best_report.f1 ||
        (report.f1 == best_report.f1 && report.accuracy > best_report.accuracy);
    if (better) {
      best = g;
      best_report = std::move(report);
      have_best = true;
    }
  }
  return {grid[best], best_report};
}

}  // namespace cfx
