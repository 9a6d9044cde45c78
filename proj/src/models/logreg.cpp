#include <cmath>
#include <stdexcept>

#include "cfx/kernels.hpp"
#include "cfx/models.hpp"
#include "model_detail.hpp"

namespace cfx {

namespace {

// Weighted mean cross-entropy plus an L2 penalty on the weights (not the
// bias). Gradient is written into gw/gb when requested.
double logreg_objective(const std::vector<double>& x_std, std::size_t p,
                        const std::vector<int>& y, double cw0, double cw1,
                        double l2, const std::vector<double>& w, double b,
                        std::vector<double>* gw, double* gb) {
  const std::size_t n = y.size();
  double loss = 0.0;
  if (gw) {
    std::fill(gw->begin(), gw->end(), 0.0);
    *gb = 0.0;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double* xi = x_std.data() + i * p;
    const double z = kernels::dot(w.data(), xi, p) + b;
    const double cw = y[i] == 1 ? cw1 : cw0;
    loss += cw * (detail::softplus(z) - (y[i] == 1 ? z : 0.0));
    if (gw) {
      const double g = cw * (detail::sigmoid(z) - (y[i] == 1 ? 1.0 : 0.0));
      kernels::axpy(g, xi, gw->data(), p);
      *gb += g;
    }
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  loss *= inv_n;
  double reg = 0.0;
  for (double wj : w) reg += wj * wj;
  loss += 0.5 * l2 * reg;
  if (gw) {
    for (std::size_t j = 0; j < p; ++j)
      (*gw)[j] = (*gw)[j] * inv_n + l2 * w[j];
    *gb *= inv_n;
  }
  return loss;
}

}  // namespace

LogRegModel::LogRegModel(Scaler scaler, std::vector<double> weights,
                         double bias)
    : scaler_(std::move(scaler)), weights_(std::move(weights)), bias_(bias) {}

double LogRegModel::score(std::span<const double> x) const {
  std::vector<double>& z = detail::scratch_buffer(weights_.size());
  scaler_.transform(x, z);
  return detail::sigmoid(kernels::dot(weights_.data(), z.data(), z.size()) +
                         bias_);
}

nlohmann::ordered_json LogRegModel::to_json() const {
  nlohmann::ordered_json j;
  j["scaler"] = scaler_.to_json();
  j["weights"] = weights_;
  j["bias"] = bias_;
  return j;
}

std::unique_ptr<LogRegModel> train_logreg(const Dataset& data,
                                          const LogRegConfig& cfg) {
  if (cfg.l2 < 0.0) throw std::invalid_argument("train_logreg: l2 must be >= 0");
  const std::size_t n = data.rows();
  const std::size_t p = data.cols();

  Scaler scaler = Scaler::fit(data);
  std::vector<double> x_std(n * p);
  for (std::size_t i = 0; i < n; ++i)
    scaler.transform(data.row(i), {x_std.data() + i * p, p});

  auto [cw0, cw1] = detail::class_weights(data, cfg.balanced);

  std::vector<double> w(p, 0.0), gw(p), w_try(p), gw_try(p);
  double b = 0.0, gb = 0.0, gb_try = 0.0;

  double loss = logreg_objective(x_std, p, data.targets(), cw0, cw1, cfg.l2,
                                 w, b, &gw, &gb);
  double lr = 1.0;
  bool converged = cfg.max_iter == 0;
  for (int it = 0; it < cfg.max_iter; ++it) {
    for (std::size_t j = 0; j < p; ++j) w_try[j] = w[j] - lr * gw[j];
    const double b_try = b - lr * gb;
    const double loss_try = logreg_objective(x_std, p, data.targets(), cw0,
                                             cw1, cfg.l2, w_try, b_try,
                                             &gw_try, &gb_try);
    if (std::isfinite(loss_try) && loss_try <= loss) {
      const double drop = loss - loss_try;
      w.swap(w_try);
      gw.swap(gw_try);
      b = b_try;
      gb = gb_try;
      loss = loss_try;
      lr = std::min(lr * 1.1, 10.0);
      if (drop < cfg.tol) {
        converged = true;
        break;
      }
    } else {
      lr *= 0.5;
      if (lr < 1e-14) {
        // No representable descent step left.
        converged = true;
        break;
      }
    }
  }
  if (!converged)
    throw std::runtime_error("train_logreg: no convergence within iteration cap");

  return std::make_unique<LogRegModel>(std::move(scaler), std::move(w), b);
}

}  // namespace cfx
