#include <fstream>
#include <stdexcept>

#include "cfx/models.hpp"

namespace cfx {

namespace {
constexpr int kSchemaVersion = 1;
}

nlohmann::ordered_json predictor_to_json(const Predictor& model) {
  nlohmann::ordered_json j;
  j["schema"] = kSchemaVersion;
  j["kind"] = model.kind();
  j["model"] = model.to_json();
  return j;
}

std::unique_ptr<Predictor> predictor_from_json(const nlohmann::json& j) {
  if (j.at("schema").get<int>() != kSchemaVersion)
    throw std::runtime_error("predictor: unsupported schema version");
  const std::string kind = j.at("kind").get<std::string>();
  const nlohmann::json& m = j.at("model");

  if (kind == "logreg") {
    return std::make_unique<LogRegModel>(
        Scaler::from_json(m.at("scaler")),
        m.at("weights").get<std::vector<double>>(),
        m.at("bias").get<double>());
  }
  if (kind == "mlp") {
    MlpNet net(m.at("inputs").get<std::size_t>(),
               m.at("hidden").get<std::size_t>());
    auto params = m.at("params").get<std::vector<double>>();
    if (params.size() != net.param_count())
      throw std::runtime_error("predictor: corrupt mlp parameter block");
    net.params() = std::move(params);
    return std::make_unique<MlpModel>(Scaler::from_json(m.at("scaler")),
                                      std::move(net));
  }
  if (kind == "gradboost") {
    std::vector<RegressionTree> trees;
    for (const auto& tj : m.at("trees")) {
      std::vector<TreeNode> nodes;
      for (const auto& nj : tj) {
        TreeNode nd;
        nd.feature = nj.at("feature").get<int>();
        nd.threshold = nj.at("threshold").get<double>();
        nd.left = nj.at("left").get<int>();
        nd.right = nj.at("right").get<int>();
        nd.value = nj.at("value").get<double>();
        nodes.push_back(nd);
      }
      trees.emplace_back(std::move(nodes));
    }
    return std::make_unique<GradBoostModel>(
        Scaler::from_json(m.at("scaler")), m.at("f0").get<double>(),
        m.at("learning_rate").get<double>(), std::move(trees));
  }
  if (kind == "linsvc") {
    return std::make_unique<LinearSvcModel>(
        Scaler::from_json(m.at("scaler")),
        m.at("weights").get<std::vector<double>>(), m.at("bias").get<double>(),
        m.at("platt_a").get<double>(), m.at("platt_b").get<double>());
  }
  throw std::runtime_error("predictor: unknown kind '" + kind + "'");
}

void save_predictor(const Predictor& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_predictor: cannot write " + path);
  out << predictor_to_json(model).dump(2) << '\n';
}

std::unique_ptr<Predictor> load_predictor(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_predictor: cannot open " + path);
  nlohmann::json j = nlohmann::json::parse(in);
  return predictor_from_json(j);
}

}  // namespace cfx
