#pragma once

#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cfx/generator.hpp"

namespace cfx {

enum class Direction { increase, decrease, tolerance };

struct Statement {
  std::string feature;
  double current = 0.0;
  double counterfactual = 0.0;
  Direction direction = Direction::increase;

  bool operator==(const Statement&) const = default;
};

// Structured form of an explanation: one statement per materially changed
// feature, ordered by descending MAD-normalised change magnitude.
struct Explanation {
  CfKind kind = CfKind::negative;
  std::vector<Statement> statements;
  double achieved_score = 0.0;
  bool valid = false;

  bool operator==(const Explanation&) const = default;
};

struct RenderedExplanation {
  Explanation explanation;
  std::string text;
};

// "Your application was denied because ... If ... had instead been ... and
// all other values remained constant, your application would have been
// approved." Invalid results are flagged as found-within-budget failures.
RenderedExplanation render_negative(const CounterfactualResult& result,
                                    std::span<const FeatureSpec> specs);

// Safety-margin report for an accepted instance: one tolerance line per
// changed feature.
RenderedExplanation render_positive(const CounterfactualResult& result,
                                    std::span<const FeatureSpec> specs);

nlohmann::ordered_json to_json(const Explanation& explanation);
Explanation explanation_from_json(const nlohmann::json& j);

// Value formatting at the feature's display precision.
std::string format_value(double value, int decimals);

}  // namespace cfx
