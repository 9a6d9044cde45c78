#include "cfx/explain.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "cfx/distance.hpp"

namespace cfx {

namespace {

const char* kBudgetMessage = "No counterfactual found within budget";

struct RankedChange {
  std::size_t feature;
  double magnitude;  // |delta| / MAD
};

std::vector<RankedChange> ranked_changes(const CounterfactualResult& result,
                                         std::span<const FeatureSpec> specs) {
  if (result.deltas.size() != specs.size())
    throw std::invalid_argument("render: result/specs length mismatch");
  std::vector<RankedChange> changes;
  for (std::size_t j = 0; j < specs.size(); ++j) {
    const double d = result.deltas[j];
    if (std::abs(d) <= change_threshold(specs[j])) continue;
    const double mad = specs[j].mad > 0.0 ? specs[j].mad : 1.0;
    changes.push_back({j, std::abs(d) / mad});
  }
  std::stable_sort(changes.begin(), changes.end(),
                   [](const RankedChange& a, const RankedChange& b) {
                     return a.magnitude > b.magnitude;
                   });
  return changes;
}

Explanation build(const CounterfactualResult& result,
                  std::span<const FeatureSpec> specs, bool positive) {
  Explanation e;
  e.kind = positive ? CfKind::positive : CfKind::negative;
  e.achieved_score = result.y_achieved;
  e.valid = result.valid;
  for (const RankedChange& c : ranked_changes(result, specs)) {
    Statement s;
    s.feature = specs[c.feature].name;
    s.current = result.x_original[c.feature];
    s.counterfactual = result.x_cf[c.feature];
    s.direction = positive ? Direction::tolerance
                           : (result.deltas[c.feature] > 0.0
                                  ? Direction::increase
                                  : Direction::decrease);
    e.statements.push_back(std::move(s));
  }
  return e;
}

std::string join_clauses(const std::vector<std::string>& clauses) {
  std::string out;
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    if (i > 0) out += (i + 1 == clauses.size()) ? " and " : ", ";
    out += clauses[i];
  }
  return out;
}

int decimals_of(std::span<const FeatureSpec> specs, const std::string& name) {
  for (const FeatureSpec& s : specs)
    if (s.name == name) return s.display_decimals;
  return 6;
}

}  // namespace

std::string format_value(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
  std::string s(buf);
  // Avoid "-0" / "-0.00" renderings for tiny negative values.
  if (s.size() > 1 && s[0] == '-' &&
      s.find_first_not_of("0.", 1) == std::string::npos)
    s = s.substr(1);
  return s;
}

RenderedExplanation render_negative(const CounterfactualResult& result,
                                    std::span<const FeatureSpec> specs) {
  if (result.kind != CfKind::negative)
    throw std::invalid_argument("render_negative: result is not negative-mode");
  RenderedExplanation out;
  out.explanation = build(result, specs, false);

  if (!result.valid) {
    out.text = std::string(kBudgetMessage) + ": best achieved score " +
               format_value(result.y_achieved, 4) + " vs target " +
               format_value(result.y_target, 4) + ".";
    return out;
  }
  if (out.explanation.statements.empty()) {
    out.text =
        "Your application is already at the decision boundary; no feature "
        "changes are required.";
    return out;
  }

  std::vector<std::string> because, instead;
  for (const Statement& s : out.explanation.statements) {
    const int dec = decimals_of(specs, s.feature);
    because.push_back("your " + s.feature + " is " +
                      format_value(s.current, dec));
    const char* verb = instead.empty() ? " had instead been " : " had been ";
    instead.push_back("your " + s.feature + verb +
                      format_value(s.counterfactual, dec));
  }
  out.text = "Your application was denied because " + join_clauses(because) +
             ". If " + join_clauses(instead) +
             " and all other values remained constant, your application "
             "would have been approved.";
  return out;
}

RenderedExplanation render_positive(const CounterfactualResult& result,
                                    std::span<const FeatureSpec> specs) {
  if (result.kind != CfKind::positive)
    throw std::invalid_argument("render_positive: result is not positive-mode");
  RenderedExplanation out;
  out.explanation = build(result, specs, true);

  if (!result.valid) {
    out.text = std::string(kBudgetMessage) + ": best achieved score " +
               format_value(result.y_achieved, 4) + " vs target " +
               format_value(result.y_target, 4) + ".";
    return out;
  }
  if (out.explanation.statements.empty()) {
    out.text = "No margin: application is at the decision boundary.";
    return out;
  }

  std::string text;
  for (const Statement& s : out.explanation.statements) {
    const int dec = decimals_of(specs, s.feature);
    text += "Your " + s.feature + " may move from " +
            format_value(s.current, dec) + " to " +
            format_value(s.counterfactual, dec) +
            " before approval is at risk, all else constant.\n";
  }
  if (!text.empty() && text.back() == '\n') text.pop_back();
  out.text = std::move(text);
  return out;
}

nlohmann::ordered_json to_json(const Explanation& explanation) {
  nlohmann::ordered_json j;
  j["kind"] = explanation.kind == CfKind::positive ? "positive" : "negative";
  j["valid"] = explanation.valid;
  j["score"] = explanation.achieved_score;
  nlohmann::ordered_json stmts = nlohmann::ordered_json::array();
  for (const Statement& s : explanation.statements) {
    const char* dir = s.direction == Direction::increase   ? "increase"
                      : s.direction == Direction::decrease ? "decrease"
                                                           : "tolerance";
    stmts.push_back({{"feature", s.feature},
                     {"current", s.current},
                     {"counterfactual", s.counterfactual},
                     {"direction", dir}});
  }
  j["statements"] = std::move(stmts);
  return j;
}

Explanation explanation_from_json(const nlohmann::json& j) {
  Explanation e;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "positive")
    e.kind = CfKind::positive;
  else if (kind == "negative")
    e.kind = CfKind::negative;
  else
    throw std::runtime_error("explanation: unknown kind '" + kind + "'");
  e.valid = j.at("valid").get<bool>();
  e.achieved_score = j.at("score").get<double>();
  for (const auto& sj : j.at("statements")) {
    Statement s;
    s.feature = sj.at("feature").get<std::string>();
    s.current = sj.at("current").get<double>();
    s.counterfactual = sj.at("counterfactual").get<double>();
    const std::string dir = sj.at("direction").get<std::string>();
    if (dir == "increase")
      s.direction = Direction::increase;
    else if (dir == "decrease")
      s.direction = Direction::decrease;
    else if (dir == "tolerance")
      s.direction = Direction::tolerance;
    else
      throw std::runtime_error("explanation: unknown direction '" + dir + "'");
    e.statements.push_back(std::move(s));
  }
  return e;
}

}  // namespace cfx
