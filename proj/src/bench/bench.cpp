#include "cfx/bench.hpp"

#include <cmath>
#include <future>
#include <stdexcept>

#include "cfx/weights.hpp"

namespace cfx {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Strategy-independent per-instance seed, so weighted runs can reproduce the
// baseline stream.
std::uint64_t instance_seed(std::uint64_t base, std::size_t model_idx,
                            std::size_t row) {
  return splitmix64(base ^ splitmix64(0x9e3779b97f4a7c15ULL * (model_idx + 1)) ^
                    splitmix64(0xc2b2ae3d27d4eb4fULL * (row + 1)));
}

}  // namespace

std::string strategy_name(Strategy s) {
  switch (s) {
    case Strategy::baseline:
      return "baseline";
    case Strategy::importance:
      return "importance";
    case Strategy::knn:
      return "knn";
    case Strategy::allones:
      return "allones";
  }
  return "unknown";
}

Strategy strategy_from_name(const std::string& name) {
  if (name == "baseline") return Strategy::baseline;
  if (name == "importance") return Strategy::importance;
  if (name == "knn") return Strategy::knn;
  if (name == "allones") return Strategy::allones;
  throw std::invalid_argument("unknown strategy '" + name + "'");
}

std::size_t counterfactual_size(const CounterfactualResult& result,
                                std::span<const FeatureSpec> specs) {
  return changed_feature_count(result.deltas, specs);
}

namespace {

// One (model, strategy) cell. Runs on a worker thread: the dataset and the
// trained predictors are immutable, and the per-instance seeds depend only
// on the base seed, model index and row, so cell results are independent of
// scheduling.
SizeReport run_size_cell(const Dataset& data, const std::string& model_name,
                         const Predictor& model, std::size_t model_index,
                         Strategy strategy,
                         const std::vector<std::size_t>& instances,
                         const SizeBenchConfig& cfg) {
  SizeReport report;
  report.model = model_name;
  report.strategy = strategy;
  report.n_instances = instances.size();

  try {
    WeightVector global;
    if (strategy == Strategy::importance)
      global = global_theta(data, cfg.smoothing);

    std::vector<double> sizes;
    sizes.reserve(instances.size());
    for (std::size_t row : instances) {
      CfConfig cf = cfg.cf;
      cf.seed = instance_seed(cfg.seed, model_index, row);
      switch (strategy) {
        case Strategy::baseline:
          cf.theta.reset();
          break;
        case Strategy::importance:
          cf.theta = global;
          break;
        case Strategy::knn:
          cf.theta = knn_theta(data, data.row(row), cfg.use_rejected ? 1 : 0,
                               cfg.knn_k, cfg.smoothing);
          break;
        case Strategy::allones:
          cf.theta = WeightVector::uniform(data.specs());
          break;
      }
      CounterfactualResult result =
          cfg.use_rejected
              ? generate_negative(data.row(row), model, data, cf)
              : generate_positive(data.row(row), model, data, cf);
      if (result.valid) sizes.push_back(static_cast<double>(result.size));
    }

    report.n_valid = sizes.size();
    report.validity_rate = instances.empty()
                               ? 0.0
                               : static_cast<double>(sizes.size()) /
                                     static_cast<double>(instances.size());
    if (!sizes.empty()) {
      double mean = 0.0;
      for (double s : sizes) mean += s;
      mean /= static_cast<double>(sizes.size());
      double var = 0.0;
      for (double s : sizes) var += (s - mean) * (s - mean);
      var /= static_cast<double>(sizes.size());
      report.mean_size = mean;
      report.std_size = std::sqrt(var);
    }
  } catch (const std::exception& e) {
    report.error = e.what();
  }
  return report;
}

}  // namespace

std::vector<SizeReport> run_size_benchmark(
    const Dataset& data,
    const std::vector<std::pair<std::string, const Predictor*>>& models,
    const std::vector<Strategy>& strategies, const SizeBenchConfig& cfg) {
  // Instances per model: the first n rows the model classifies as rejected
  // (or accepted when benchmarking positive mode), in row order. Shared by
  // every strategy of that model so weighted cells see the baseline's rows.
  std::vector<std::vector<std::size_t>> instances(models.size());
  const int wanted = cfg.use_rejected ? 0 : 1;
  for (std::size_t mi = 0; mi < models.size(); ++mi)
    for (std::size_t i = 0;
         i < data.rows() && instances[mi].size() < cfg.n_instances; ++i)
      if (models[mi].second->classify(data.row(i)) == wanted)
        instances[mi].push_back(i);

  // Cells are independent; run them on a worker pool and join in a fixed
  // order so reports (and any serialized output) stay deterministic.
  std::vector<std::future<SizeReport>> futures;
  futures.reserve(models.size() * strategies.size());
  for (std::size_t mi = 0; mi < models.size(); ++mi)
    for (Strategy strategy : strategies)
      futures.push_back(std::async(std::launch::async, [&, mi, strategy] {
        return run_size_cell(data, models[mi].first, *models[mi].second, mi,
                             strategy, instances[mi], cfg);
      }));

  std::vector<SizeReport> reports;
  reports.reserve(futures.size());
  for (std::future<SizeReport>& f : futures) reports.push_back(f.get());
  return reports;
}

std::vector<PowerRow> run_power_benchmark(
    const Dataset& data,
    const std::map<std::string, std::vector<TrainConfig>>& grids, int k,
    std::uint64_t seed) {
  if (grids.empty())
    throw std::invalid_argument("run_power_benchmark: empty grid map");
  std::vector<PowerRow> rows;
  for (const auto& [family, grid] : grids) {
    auto [best, report] = grid_search(data, grid, k, seed);
    rows.push_back({family, std::move(best), std::move(report)});
  }
  return rows;
}

ImprovementReport relative_improvement(std::span<const SizeReport> reports) {
  ImprovementReport out;
  std::map<std::string, const SizeReport*> baselines;
  for (const SizeReport& r : reports)
    if (r.strategy == Strategy::baseline && r.error.empty())
      baselines[r.model] = &r;

  std::map<Strategy, std::pair<double, std::size_t>> accum;
  for (const SizeReport& r : reports) {
    if (r.strategy == Strategy::baseline || !r.error.empty()) continue;
    auto it = baselines.find(r.model);
    if (it == baselines.end())
      throw std::invalid_argument("relative_improvement: missing baseline for " +
                                  r.model);
    const double base = it->second->mean_size;
    if (base == 0.0)
      throw std::invalid_argument("relative_improvement: zero baseline mean for " +
                                  r.model);
    const double improvement = (base - r.mean_size) / base;
    out.per_model[r.model][r.strategy] = improvement;
    accum[r.strategy].first += improvement;
    accum[r.strategy].second += 1;
  }
  for (const auto& [strategy, acc] : accum)
    out.average[strategy] = acc.first / static_cast<double>(acc.second);
  return out;
}

}  // namespace cfx
