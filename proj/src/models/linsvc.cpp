#include <cmath>
#include <stdexcept>

#include "cfx/kernels.hpp"
#include "cfx/models.hpp"
#include "model_detail.hpp"

namespace cfx {

namespace {

// 0.5*||w||^2 + C * sum_i cw_i * hinge(y_i * (w.x_i + b)); subgradient in
// gw/gb when requested.
double svc_objective(const std::vector<double>& x_std, std::size_t p,
                     const std::vector<int>& y_signed, double cw0, double cw1,
                     double c, const std::vector<double>& w, double b,
                     std::vector<double>* gw, double* gb) {
  const std::size_t n = y_signed.size();
  double hinge_sum = 0.0;
  if (gw) {
    for (std::size_t j = 0; j < p; ++j) (*gw)[j] = w[j];
    *gb = 0.0;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double* xi = x_std.data() + i * p;
    const double yi = static_cast<double>(y_signed[i]);
    const double m = yi * (kernels::dot(w.data(), xi, p) + b);
    const double cw = y_signed[i] > 0 ? cw1 : cw0;
    if (m < 1.0) {
      hinge_sum += cw * (1.0 - m);
      if (gw) {
        kernels::axpy(-c * cw * yi, xi, gw->data(), p);
        *gb -= c * cw * yi;
      }
    }
  }
  double reg = 0.0;
  for (double wj : w) reg += wj * wj;
  return 0.5 * reg + c * hinge_sum;
}

// Two-parameter logistic calibration p = sigma(a*m + b) fitted to the
// training margins by the same accept/reject gradient descent.
std::pair<double, double> fit_platt(const std::vector<double>& margins,
                                    const std::vector<int>& y) {
  const std::size_t n = margins.size();
  double a = 1.0, b = 0.0;
  auto objective = [&](double pa, double pb, double* ga, double* gb) {
    double loss = 0.0;
    if (ga) *ga = 0.0;
    if (gb) *gb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double z = pa * margins[i] + pb;
      const double t = y[i] == 1 ? 1.0 : 0.0;
      loss += detail::softplus(z) - t * z;
      if (ga) {
        const double g = detail::sigmoid(z) - t;
        *ga += g * margins[i];
        *gb += g;
      }
    }
    return loss / static_cast<double>(n);
  };

  double ga = 0.0, gb = 0.0;
  double loss = objective(a, b, &ga, &gb);
  double lr = 1.0;
  for (int it = 0; it < 2000; ++it) {
    const double a_try = a - lr * ga;
    const double b_try = b - lr * gb;
    double ga_try = 0.0, gb_try = 0.0;
    const double loss_try = objective(a_try, b_try, &ga_try, &gb_try);
    if (std::isfinite(loss_try) && loss_try <= loss) {
      const double drop = loss - loss_try;
      a = a_try;
      b = b_try;
      ga = ga_try;
      gb = gb_try;
      loss = loss_try;
      lr = std::min(lr * 1.1, 10.0);
      if (drop < 1e-10) break;
    } else {
      lr *= 0.5;
      if (lr < 1e-14) break;
    }
  }
  return {a, b};
}

}  // namespace

LinearSvcModel::LinearSvcModel(Scaler scaler, std::vector<double> weights,
                               double bias, double platt_a, double platt_b)
    : scaler_(std::move(scaler)),
      weights_(std::move(weights)),
      bias_(bias),
      platt_a_(platt_a),
      platt_b_(platt_b) {}

double LinearSvcModel::margin(std::span<const double> x) const {
  std::vector<double>& z = detail::scratch_buffer(weights_.size());
  scaler_.transform(x, z);
  return kernels::dot(weights_.data(), z.data(), z.size()) + bias_;
}

double LinearSvcModel::score(std::span<const double> x) const {
  return detail::sigmoid(platt_a_ * margin(x) + platt_b_);
}

nlohmann::ordered_json LinearSvcModel::to_json() const {
  nlohmann::ordered_json j;
  j["scaler"] = scaler_.to_json();
  j["weights"] = weights_;
  j["bias"] = bias_;
  j["platt_a"] = platt_a_;
  j["platt_b"] = platt_b_;
  return j;
}

std::unique_ptr<LinearSvcModel> train_linear_svc(const Dataset& data,
                                                 const LinearSvcConfig& cfg) {
  if (!(cfg.c > 0.0)) throw std::invalid_argument("train_linear_svc: c must be > 0");
  const std::size_t n = data.rows();
  const std::size_t p = data.cols();

  Scaler scaler = Scaler::fit(data);
  std::vector<double> x_std(n * p);
  for (std::size_t i = 0; i < n; ++i)
    scaler.transform(data.row(i), {x_std.data() + i * p, p});

  std::vector<int> y_signed(n);
  for (std::size_t i = 0; i < n; ++i)
    y_signed[i] = data.targets()[i] == 1 ? 1 : -1;

  auto [cw0, cw1] = detail::class_weights(data, cfg.balanced);

  std::vector<double> w(p, 0.0), gw(p), w_try(p), gw_try(p);
  double b = 0.0, gb = 0.0, gb_try = 0.0;
  double loss = svc_objective(x_std, p, y_signed, cw0, cw1, cfg.c, w, b, &gw, &gb);
  double lr = 0.1;
  bool converged = cfg.max_iter == 0;
  for (int it = 0; it < cfg.max_iter; ++it) {
    for (std::size_t j = 0; j < p; ++j) w_try[j] = w[j] - lr * gw[j];
    const double b_try = b - lr * gb;
    const double loss_try = svc_objective(x_std, p, y_signed, cw0, cw1, cfg.c,
                                          w_try, b_try, &gw_try, &gb_try);
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
        converged = true;
        break;
      }
    }
  }
  if (!converged)
    throw std::runtime_error("train_linear_svc: no convergence within iteration cap");

  std::vector<double> margins(n);
  for (std::size_t i = 0; i < n; ++i)
    margins[i] = kernels::dot(w.data(), x_std.data() + i * p, p) + b;
  auto [pa, pb] = fit_platt(margins, data.targets());

  return std::make_unique<LinearSvcModel>(std::move(scaler), std::move(w), b,
                                          pa, pb);
}

}  // namespace cfx
