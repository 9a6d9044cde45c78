#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "cfx/dataset.hpp"
#include "cfx/generator.hpp"
#include "cfx/models.hpp"

namespace cfx {

enum class Strategy { baseline, importance, knn, allones };

std::string strategy_name(Strategy s);
Strategy strategy_from_name(const std::string& name);

// Number of features whose change exceeds the per-feature threshold
// max(1e-3 * MAD_j, 1e-9).
std::size_t counterfactual_size(const CounterfactualResult& result,
                                std::span<const FeatureSpec> specs);

struct SizeReport {
  std::string model;
  Strategy strategy = Strategy::baseline;
  // Over valid counterfactuals only; population standard deviation.
  double mean_size = 0.0;
  double std_size = 0.0;
  std::size_t n_instances = 0;  // attempted
  std::size_t n_valid = 0;
  double validity_rate = 0.0;
  // Non-empty when the whole cell failed (for example, weight construction).
  std::string error;
};

struct SizeBenchConfig {
  std::size_t n_instances = 200;
  CfConfig cf;
  std::size_t knn_k = 20;
  double smoothing = 0.1;
  std::uint64_t seed = 42;
  // Benchmark rejected-classified instances with negative counterfactuals
  // (the default), or accepted ones with positive counterfactuals.
  bool use_rejected = true;
};

// Generates counterfactuals for the first n_instances rejected-classified
// rows (deterministic row order) under every (model, strategy) pair and
// aggregates sizes. Per-instance seeds are derived from the base seed, the
// model index and the row, never the strategy, so an all-ones run reproduces
// the baseline bitwise.
std::vector<SizeReport> run_size_benchmark(
    const Dataset& data,
    const std::vector<std::pair<std::string, const Predictor*>>& models,
    const std::vector<Strategy>& strategies, const SizeBenchConfig& cfg);

struct PowerRow {
  std::string model;
  TrainConfig best_config;
  TrainReport report;
};

// Grid search per model family with k-fold CV; one row per family.
std::vector<PowerRow> run_power_benchmark(
    const Dataset& data,
    const std::map<std::string, std::vector<TrainConfig>>& grids, int k,
    std::uint64_t seed);

struct ImprovementReport {
  // model -> strategy -> (baseline mean - strategy mean) / baseline mean.
  std::map<std::string, std::map<Strategy, double>> per_model;
  // Strategy average across models.
  std::map<Strategy, double> average;
};

ImprovementReport relative_improvement(std::span<const SizeReport> reports);

}  // namespace cfx
