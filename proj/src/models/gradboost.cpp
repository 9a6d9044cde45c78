#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "cfx/models.hpp"
#include "model_detail.hpp"

namespace cfx {

namespace {

// Leaf values are exact minimisers of the exponential loss within the leaf,
// clipped to keep single-class leaves finite.
constexpr double kLeafClip = 4.0;
constexpr double kLeafEps = 1e-12;

struct TreeBuilder {
  const std::vector<double>& x_std;  // row-major, standardised
  std::size_t p;
  const std::vector<int>& y_signed;        // -1 / +1
  const std::vector<double>& residual;     // negative gradient targets
  const std::vector<double>& sample_w;     // exp(-y * F)
  int max_depth;
  int min_leaf;
  std::vector<TreeNode> nodes;

  int build(std::vector<std::size_t>& idx, int depth) {
    double best_gain = 0.0;
    int best_feature = -1;
    double best_threshold = 0.0;

    const std::size_t m = idx.size();
    double sum = 0.0;
    for (std::size_t i : idx) sum += residual[i];

    if (depth < max_depth && m >= 2 * static_cast<std::size_t>(min_leaf)) {
      std::vector<std::pair<double, std::size_t>> vals(m);
      for (std::size_t j = 0; j < p; ++j) {
        for (std::size_t k = 0; k < m; ++k)
          vals[k] = {x_std[idx[k] * p + j], idx[k]};
        std::sort(vals.begin(), vals.end());

        double left_sum = 0.0;
        for (std::size_t k = 0; k + 1 < m; ++k) {
          left_sum += residual[vals[k].second];
          if (vals[k].first == vals[k + 1].first) continue;
          const std::size_t nl = k + 1, nr = m - nl;
          if (nl < static_cast<std::size_t>(min_leaf) ||
              nr < static_cast<std::size_t>(min_leaf))
            continue;
          const double right_sum = sum - left_sum;
          // Variance-reduction gain for a least-squares split.
          const double gain = left_sum * left_sum / static_cast<double>(nl) +
                              right_sum * right_sum / static_cast<double>(nr) -
                              sum * sum / static_cast<double>(m);
          if (gain > best_gain + 1e-15) {
            best_gain = gain;
            best_feature = static_cast<int>(j);
            best_threshold = 0.5 * (vals[k].first + vals[k + 1].first);
          }
        }
      }
    }

    if (best_feature < 0) {
      // Leaf: step along the exponential-loss line search.
      double wpos = 0.0, wneg = 0.0;
      for (std::size_t i : idx) {
        if (y_signed[i] > 0)
          wpos += sample_w[i];
        else
          wneg += sample_w[i];
      }
      double value =
          0.5 * std::log((wpos + kLeafEps) / (wneg + kLeafEps));
      value = std::clamp(value, -kLeafClip, kLeafClip);
      TreeNode leaf;
      leaf.value = value;
      nodes.push_back(leaf);
      return static_cast<int>(nodes.size() - 1);
    }

    std::vector<std::size_t> left, right;
    for (std::size_t i : idx) {
      if (x_std[i * p + static_cast<std::size_t>(best_feature)] <= best_threshold)
        left.push_back(i);
      else
        right.push_back(i);
    }

    const int node_id = static_cast<int>(nodes.size());
    nodes.emplace_back();
    nodes[node_id].feature = best_feature;
    nodes[node_id].threshold = best_threshold;
    const int l = build(left, depth + 1);
    const int r = build(right, depth + 1);
    nodes[node_id].left = l;
    nodes[node_id].right = r;
    return node_id;
  }
};

double exp_loss(const std::vector<int>& y_signed, const std::vector<double>& f) {
  double loss = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    loss += std::exp(-static_cast<double>(y_signed[i]) * f[i]);
  return loss / static_cast<double>(f.size());
}

}  // namespace

RegressionTree::RegressionTree(std::vector<TreeNode> nodes)
    : nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw std::invalid_argument("RegressionTree: empty");
}

double RegressionTree::predict(std::span<const double> z) const {
  int node = 0;
  while (nodes_[node].feature >= 0) {
    const TreeNode& nd = nodes_[node];
    node = z[static_cast<std::size_t>(nd.feature)] <= nd.threshold ? nd.left
                                                                   : nd.right;
  }
  return nodes_[node].value;
}

GradBoostModel::GradBoostModel(Scaler scaler, double f0, double learning_rate,
                               std::vector<RegressionTree> trees)
    : scaler_(std::move(scaler)),
      f0_(f0),
      learning_rate_(learning_rate),
      trees_(std::move(trees)) {}

double GradBoostModel::margin(std::span<const double> x) const {
  std::vector<double>& z = detail::scratch_buffer(scaler_.mean.size());
  scaler_.transform(x, z);
  double f = f0_;
  for (const RegressionTree& t : trees_) f += learning_rate_ * t.predict(z);
  return f;
}

double GradBoostModel::score(std::span<const double> x) const {
  // The margin is a half log-odds, so the probability link is sigma(2F).
  return detail::sigmoid(2.0 * margin(x));
}

void GradBoostModel::set_stage_losses(std::vector<double> losses) {
  stage_losses_ = std::move(losses);
}

nlohmann::ordered_json GradBoostModel::to_json() const {
  nlohmann::ordered_json j;
  j["scaler"] = scaler_.to_json();
  j["f0"] = f0_;
  j["learning_rate"] = learning_rate_;
  nlohmann::ordered_json trees = nlohmann::ordered_json::array();
  for (const RegressionTree& t : trees_) {
    nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
    for (const TreeNode& nd : t.nodes()) {
      nodes.push_back({{"feature", nd.feature},
                       {"threshold", nd.threshold},
                       {"left", nd.left},
                       {"right", nd.right},
                       {"value", nd.value}});
    }
    trees.push_back(std::move(nodes));
  }
  j["trees"] = std::move(trees);
  return j;
}

std::unique_ptr<GradBoostModel> train_gradboost(const Dataset& data,
                                                const GradBoostConfig& cfg) {
  if (cfg.trees < 1) throw std::invalid_argument("train_gradboost: trees >= 1");
  if (cfg.depth < 1) throw std::invalid_argument("train_gradboost: depth >= 1");

  const std::size_t n = data.rows();
  const std::size_t p = data.cols();

  Scaler scaler = Scaler::fit(data);
  std::vector<double> x_std(n * p);
  for (std::size_t i = 0; i < n; ++i)
    scaler.transform(data.row(i), {x_std.data() + i * p, p});

  std::vector<int> y_signed(n);
  for (std::size_t i = 0; i < n; ++i)
    y_signed[i] = data.targets()[i] == 1 ? 1 : -1;

  // Detect the degenerate case where no split is ever possible.
  {
    bool splittable = false;
    for (std::size_t j = 0; j < p && !splittable; ++j)
      for (std::size_t i = 1; i < n; ++i)
        if (x_std[i * p + j] != x_std[j]) {
          splittable = true;
          break;
        }
    if (!splittable)
      throw std::runtime_error("train_gradboost: degenerate split (all rows identical)");
  }

  const double n1 = static_cast<double>(data.count_class(1));
  const double n0 = static_cast<double>(n) - n1;
  const double f0 = 0.5 * std::log(n1 / n0);

  std::vector<double> f(n, f0);
  std::vector<double> sample_w(n), residual(n);
  std::vector<RegressionTree> trees;
  trees.reserve(static_cast<std::size_t>(cfg.trees));
  std::vector<double> stage_losses;
  stage_losses.reserve(static_cast<std::size_t>(cfg.trees) + 1);
  stage_losses.push_back(exp_loss(y_signed, f));

  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), 0);

  for (int m = 0; m < cfg.trees; ++m) {
    for (std::size_t i = 0; i < n; ++i) {
      sample_w[i] = std::exp(-static_cast<double>(y_signed[i]) * f[i]);
      residual[i] = static_cast<double>(y_signed[i]) * sample_w[i];
    }
    TreeBuilder builder{x_std, p, y_signed, residual, sample_w,
                        cfg.depth, cfg.min_leaf, {}};
    std::vector<std::size_t> idx = all;
    builder.build(idx, 0);
    RegressionTree tree(std::move(builder.nodes));
    for (std::size_t i = 0; i < n; ++i)
      f[i] += cfg.learning_rate * tree.predict({x_std.data() + i * p, p});
    trees.push_back(std::move(tree));
    stage_losses.push_back(exp_loss(y_signed, f));
  }

  auto model = std::make_unique<GradBoostModel>(std::move(scaler), f0,
                                                cfg.learning_rate,
                                                std::move(trees));
  model->set_stage_losses(std::move(stage_losses));
  return model;
}

}  // namespace cfx
