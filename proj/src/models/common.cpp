#include <cmath>
#include <stdexcept>

#include "cfx/models.hpp"
#include "model_detail.hpp"

namespace cfx {

Scaler Scaler::fit(const Dataset& data) {
  const std::size_t p = data.cols();
  const double n = static_cast<double>(data.rows());
  Scaler s;
  s.mean.assign(p, 0.0);
  s.inv_std.assign(p, 1.0);
  for (std::size_t i = 0; i < data.rows(); ++i) {
    auto row = data.row(i);
    for (std::size_t j = 0; j < p; ++j) s.mean[j] += row[j];
  }
  for (std::size_t j = 0; j < p; ++j) s.mean[j] /= n;
  std::vector<double> var(p, 0.0);
  for (std::size_t i = 0; i < data.rows(); ++i) {
    auto row = data.row(i);
    for (std::size_t j = 0; j < p; ++j) {
      const double d = row[j] - s.mean[j];
      var[j] += d * d;
    }
  }
  for (std::size_t j = 0; j < p; ++j) {
    const double sd = std::sqrt(var[j] / n);
    // Constant columns standardise to zero either way.
    s.inv_std[j] = sd > 0.0 ? 1.0 / sd : 1.0;
  }
  return s;
}

void Scaler::transform(std::span<const double> in, std::span<double> out) const {
  if (in.size() != mean.size() || out.size() != mean.size())
    throw std::invalid_argument("Scaler: dimension mismatch");
  for (std::size_t j = 0; j < mean.size(); ++j)
    out[j] = (in[j] - mean[j]) * inv_std[j];
}

nlohmann::ordered_json Scaler::to_json() const {
  return {{"mean", mean}, {"inv_std", inv_std}};
}

Scaler Scaler::from_json(const nlohmann::json& j) {
  Scaler s;
  s.mean = j.at("mean").get<std::vector<double>>();
  s.inv_std = j.at("inv_std").get<std::vector<double>>();
  if (s.mean.size() != s.inv_std.size())
    throw std::runtime_error("Scaler: corrupt document");
  return s;
}

double TrainConfig::param(const std::string& key, double fallback) const {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

nlohmann::ordered_json TrainConfig::to_json() const {
  nlohmann::ordered_json j;
  j["kind"] = kind;
  j["params"] = params;
  return j;
}

TrainConfig TrainConfig::from_json(const nlohmann::json& j) {
  TrainConfig cfg;
  cfg.kind = j.at("kind").get<std::string>();
  if (j.contains("params"))
    cfg.params = j.at("params").get<std::map<std::string, double>>();
  return cfg;
}

}  // namespace cfx
