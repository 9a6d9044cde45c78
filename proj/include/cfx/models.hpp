#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cfx/dataset.hpp"

namespace cfx {

// Opaque scoring interface: the black box. score(x) is P(y=1) in [0,1] and
// deterministic for a trained model; trained predictors are immutable and
// safe for concurrent scoring.
class Predictor {
 public:
  virtual ~Predictor() = default;
  virtual double score(std::span<const double> x) const = 0;
  virtual std::string kind() const = 0;
  virtual nlohmann::ordered_json to_json() const = 0;

  int classify(std::span<const double> x) const {
    return score(x) >= 0.5 ? 1 : 0;
  }
};

// Train-set standardisation owned by every model, so callers always work in
// original feature units.
struct Scaler {
  std::vector<double> mean;
  std::vector<double> inv_std;

  static Scaler fit(const Dataset& data);
  void transform(std::span<const double> in, std::span<double> out) const;
  nlohmann::ordered_json to_json() const;
  static Scaler from_json(const nlohmann::json& j);
};

struct LogRegConfig {
  double l2 = 1e-3;
  bool balanced = true;
  double tol = 1e-8;    // stop when the loss change drops below this
  int max_iter = 5000;  // 0 trains nothing and returns the zero model
  std::uint64_t seed = 1;
};

struct MlpConfig {
  int hidden_units = 22;
  double learning_rate = 0.5;
  int batch_size = 32;
  int epochs = 400;
  double momentum = 0.9;
  double l2 = 1e-4;
  double tol = 1e-6;
  std::uint64_t seed = 1;
};

struct GradBoostConfig {
  int trees = 100;
  int depth = 3;
  double learning_rate = 0.1;
  int min_leaf = 1;
};

struct LinearSvcConfig {
  double c = 0.001;
  bool balanced = true;
  double tol = 1e-8;
  int max_iter = 5000;
  std::uint64_t seed = 1;
};

class LogRegModel final : public Predictor {
 public:
  LogRegModel(Scaler scaler, std::vector<double> weights, double bias);
  double score(std::span<const double> x) const override;
  std::string kind() const override { return "logreg"; }
  nlohmann::ordered_json to_json() const override;

  const std::vector<double>& weights() const { return weights_; }
  double bias() const { return bias_; }

 private:
  Scaler scaler_;
  std::vector<double> weights_;
  double bias_;
};

// Single hidden layer, logistic activations throughout. Kept separate from
// the Predictor wrapper so tests can gradient-check it directly.
class MlpNet {
 public:
  MlpNet(std::size_t inputs, std::size_t hidden);

  std::size_t inputs() const { return inputs_; }
  std::size_t hidden() const { return hidden_; }
  std::size_t param_count() const { return params_.size(); }
  std::vector<double>& params() { return params_; }
  const std::vector<double>& params() const { return params_; }

  double forward(std::span<const double> z) const;

  // Mean cross-entropy over the batch plus 0.5*l2*||weights||^2 / batch;
  // accumulates the analytic gradient into `grad` (same layout as params).
  double loss_and_grad(const std::vector<double>& x_std, std::size_t p,
                       const std::vector<int>& y,
                       std::span<const std::size_t> batch, double l2,
                       std::vector<double>& grad) const;

 private:
  std::size_t inputs_;
  std::size_t hidden_;
  // Layout: W1 (hidden x inputs, row-major), b1 (hidden), w2 (hidden), b2.
  std::vector<double> params_;
};

class MlpModel final : public Predictor {
 public:
  MlpModel(Scaler scaler, MlpNet net);
  double score(std::span<const double> x) const override;
  std::string kind() const override { return "mlp"; }
  nlohmann::ordered_json to_json() const override;

  const MlpNet& net() const { return net_; }

 private:
  Scaler scaler_;
  MlpNet net_;
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;
};

class RegressionTree {
 public:
  explicit RegressionTree(std::vector<TreeNode> nodes);
  double predict(std::span<const double> z) const;
  const std::vector<TreeNode>& nodes() const { return nodes_; }

 private:
  std::vector<TreeNode> nodes_;
};

// Boosted shallow regression trees on the exponential loss; the ensemble
// margin is a half log-odds, mapped to a probability via sigma(2*F).
class GradBoostModel final : public Predictor {
 public:
  GradBoostModel(Scaler scaler, double f0, double learning_rate,
                 std::vector<RegressionTree> trees);
  double score(std::span<const double> x) const override;
  std::string kind() const override { return "gradboost"; }
  nlohmann::ordered_json to_json() const override;

  double margin(std::span<const double> x) const;
  const std::vector<RegressionTree>& trees() const { return trees_; }

  // Training exponential loss after each stage, for diagnostics.
  const std::vector<double>& stage_losses() const { return stage_losses_; }
  void set_stage_losses(std::vector<double> losses);

 private:
  Scaler scaler_;
  double f0_;
  double learning_rate_;
  std::vector<RegressionTree> trees_;
  std::vector<double> stage_losses_;
};

// Linear hinge-loss classifier; scores are calibrated to [0,1] by a logistic
// fit on the training decision values.
class LinearSvcModel final : public Predictor {
 public:
  LinearSvcModel(Scaler scaler, std::vector<double> weights, double bias,
                 double platt_a, double platt_b);
  double score(std::span<const double> x) const override;
  std::string kind() const override { return "linsvc"; }
  nlohmann::ordered_json to_json() const override;

  double margin(std::span<const double> x) const;

 private:
  Scaler scaler_;
  std::vector<double> weights_;
  double bias_;
  double platt_a_;
  double platt_b_;
};

std::unique_ptr<LogRegModel> train_logreg(const Dataset& data,
                                          const LogRegConfig& cfg = {});
std::unique_ptr<MlpModel> train_mlp(const Dataset& data,
                                    const MlpConfig& cfg = {});
std::unique_ptr<GradBoostModel> train_gradboost(
    const Dataset& data, const GradBoostConfig& cfg = {});
std::unique_ptr<LinearSvcModel> train_linear_svc(
    const Dataset& data, const LinearSvcConfig& cfg = {});

// String-keyed training configuration, the unit of grid search and the CLI.
struct TrainConfig {
  std::string kind = "logreg";
  std::map<std::string, double> params;

  double param(const std::string& key, double fallback) const;
  nlohmann::ordered_json to_json() const;
  static TrainConfig from_json(const nlohmann::json& j);
};

std::unique_ptr<Predictor> train_model(const Dataset& data,
                                       const TrainConfig& cfg);

struct Metrics {
  double accuracy = 0.0;
  double f1 = 0.0;  // positive class
};

Metrics evaluate(const Predictor& model, const Dataset& data);
Metrics evaluate(const Predictor& model, const Dataset& data,
                 std::span<const std::size_t> rows);

struct TrainReport {
  double f1 = 0.0;        // unweighted mean over folds
  double accuracy = 0.0;  // unweighted mean over folds
  int folds = 0;
  std::map<std::string, double> hyperparams;
};

using Trainer = std::function<std::unique_ptr<Predictor>(const Dataset&)>;

// Deterministic stratified k-fold cross validation. Throws if any fold ends
// up single-class.
TrainReport cross_validate(const Dataset& data, const Trainer& trainer, int k,
                           std::uint64_t seed,
                           std::map<std::string, double> hyperparams = {});
TrainReport cross_validate(const Dataset& data, const TrainConfig& cfg, int k,
                           std::uint64_t seed);

// Evaluates every configuration and picks the best mean F1; ties break by
// accuracy, then grid order.
std::pair<TrainConfig, TrainReport> grid_search(
    const Dataset& data, std::span<const TrainConfig> grid, int k,
    std::uint64_t seed);

// Versioned JSON persistence; a round trip reproduces identical scores.
nlohmann::ordered_json predictor_to_json(const Predictor& model);
std::unique_ptr<Predictor> predictor_from_json(const nlohmann::json& j);
void save_predictor(const Predictor& model, const std::string& path);
std::unique_ptr<Predictor> load_predictor(const std::string& path);

}  // namespace cfx
