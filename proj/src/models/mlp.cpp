#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "cfx/kernels.hpp"
#include "cfx/models.hpp"
#include "model_detail.hpp"

namespace cfx {

MlpNet::MlpNet(std::size_t inputs, std::size_t hidden)
    : inputs_(inputs), hidden_(hidden) {
  if (inputs == 0 || hidden == 0)
    throw std::invalid_argument("MlpNet: empty layer");
  params_.assign(hidden * inputs + hidden + hidden + 1, 0.0);
}

double MlpNet::forward(std::span<const double> z) const {
  const double* w1 = params_.data();
  const double* b1 = w1 + hidden_ * inputs_;
  const double* w2 = b1 + hidden_;
  const double b2 = *(w2 + hidden_);
  double out = b2;
  for (std::size_t h = 0; h < hidden_; ++h) {
    const double a =
        detail::sigmoid(kernels::dot(w1 + h * inputs_, z.data(), inputs_) + b1[h]);
    out += w2[h] * a;
  }
  return detail::sigmoid(out);
}

double MlpNet::loss_and_grad(const std::vector<double>& x_std, std::size_t p,
                             const std::vector<int>& y,
                             std::span<const std::size_t> batch, double l2,
                             std::vector<double>& grad) const {
  if (p != inputs_) throw std::invalid_argument("MlpNet: input width mismatch");
  grad.assign(params_.size(), 0.0);

  const double* w1 = params_.data();
  const double* b1 = w1 + hidden_ * inputs_;
  const double* w2 = b1 + hidden_;
  const double b2 = *(w2 + hidden_);
  double* g_w1 = grad.data();
  double* g_b1 = g_w1 + hidden_ * inputs_;
  double* g_w2 = g_b1 + hidden_;
  double* g_b2 = g_w2 + hidden_;

  std::vector<double> act(hidden_);
  double loss = 0.0;
  for (std::size_t idx : batch) {
    const double* xi = x_std.data() + idx * p;
    double z2 = b2;
    for (std::size_t h = 0; h < hidden_; ++h) {
      act[h] = detail::sigmoid(kernels::dot(w1 + h * inputs_, xi, inputs_) + b1[h]);
      z2 += w2[h] * act[h];
    }
    const double target = y[idx] == 1 ? 1.0 : 0.0;
    loss += detail::softplus(z2) - target * z2;

    // d(loss)/d(z2) for the logistic output with cross-entropy.
    const double d2 = detail::sigmoid(z2) - target;
    *g_b2 += d2;
    for (std::size_t h = 0; h < hidden_; ++h) {
      g_w2[h] += d2 * act[h];
      const double dh = d2 * w2[h] * act[h] * (1.0 - act[h]);
      g_b1[h] += dh;
      kernels::axpy(dh, xi, g_w1 + h * inputs_, inputs_);
    }
  }

  const double inv_n = 1.0 / static_cast<double>(batch.size());
  loss *= inv_n;
  for (double& g : grad) g *= inv_n;

  if (l2 > 0.0) {
    // Penalise weights only, not biases.
    double reg = 0.0;
    for (std::size_t i = 0; i < hidden_ * inputs_; ++i) {
      reg += w1[i] * w1[i];
      g_w1[i] += l2 * w1[i];
    }
    for (std::size_t h = 0; h < hidden_; ++h) {
      reg += w2[h] * w2[h];
      g_w2[h] += l2 * w2[h];
    }
    loss += 0.5 * l2 * reg;
  }
  return loss;
}

MlpModel::MlpModel(Scaler scaler, MlpNet net)
    : scaler_(std::move(scaler)), net_(std::move(net)) {}

double MlpModel::score(std::span<const double> x) const {
  std::vector<double>& z = detail::scratch_buffer(scaler_.mean.size());
  scaler_.transform(x, z);
  return net_.forward(z);
}

nlohmann::ordered_json MlpModel::to_json() const {
  nlohmann::ordered_json j;
  j["scaler"] = scaler_.to_json();
  j["inputs"] = net_.inputs();
  j["hidden"] = net_.hidden();
  j["params"] = net_.params();
  return j;
}

std::unique_ptr<MlpModel> train_mlp(const Dataset& data, const MlpConfig& cfg) {
  if (cfg.hidden_units < 1)
    throw std::invalid_argument("train_mlp: hidden_units must be >= 1");
  if (cfg.batch_size < 1)
    throw std::invalid_argument("train_mlp: batch_size must be >= 1");

  const std::size_t n = data.rows();
  const std::size_t p = data.cols();
  const std::size_t hidden = static_cast<std::size_t>(cfg.hidden_units);

  Scaler scaler = Scaler::fit(data);
  std::vector<double> x_std(n * p);
  for (std::size_t i = 0; i < n; ++i)
    scaler.transform(data.row(i), {x_std.data() + i * p, p});

  MlpNet net(p, hidden);
  std::mt19937_64 rng(cfg.seed);
  {
    // Glorot-style uniform init.
    const double r1 = std::sqrt(6.0 / static_cast<double>(p + hidden));
    const double r2 = std::sqrt(6.0 / static_cast<double>(hidden + 1));
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double>& params = net.params();
    for (std::size_t i = 0; i < hidden * p; ++i) params[i] = r1 * u(rng);
    for (std::size_t h = 0; h < hidden; ++h)
      params[hidden * p + hidden + h] = r2 * u(rng);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  std::vector<double> grad(net.param_count());
  std::vector<double> velocity(net.param_count(), 0.0);

  double prev_epoch_loss = std::numeric_limits<double>::infinity();
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < n;
         start += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t len =
          std::min<std::size_t>(cfg.batch_size, n - start);
      std::span<const std::size_t> batch(order.data() + start, len);
      const double loss =
          net.loss_and_grad(x_std, p, data.targets(), batch, cfg.l2, grad);
      if (!std::isfinite(loss))
        throw std::runtime_error("train_mlp: non-finite loss (learning rate too high?)");
      epoch_loss += loss;
      ++batches;
      std::vector<double>& params = net.params();
      for (std::size_t i = 0; i < params.size(); ++i) {
        velocity[i] = cfg.momentum * velocity[i] - cfg.learning_rate * grad[i];
        params[i] += velocity[i];
      }
    }
    epoch_loss /= static_cast<double>(batches);
    if (std::abs(prev_epoch_loss - epoch_loss) < cfg.tol) break;
    prev_epoch_loss = epoch_loss;
  }

  return std::make_unique<MlpModel>(std::move(scaler), std::move(net));
}

}  // namespace cfx
