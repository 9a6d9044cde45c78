#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cfx/explain.hpp"
#include "helpers.hpp"

using namespace cfx;

namespace {

std::vector<FeatureSpec> money_specs() {
  std::vector<FeatureSpec> specs(2);
  specs[0] = {"annual income", 0.0, 1e6, true, 5000.0, false, 0};
  specs[1] = {"current balance", 0.0, 1e5, true, 300.0, false, 0};
  return specs;
}

CounterfactualResult money_result() {
  CounterfactualResult r;
  r.kind = CfKind::negative;
  r.x_original = {30000.0, 200.0};
  r.x_cf = {35000.0, 400.0};
  r.deltas = {5000.0, 200.0};
  r.y_target = 0.55;
  r.y_achieved = 0.56;
  r.distance = 5000.0 / 5000.0 + 200.0 / 300.0;
  r.lambda_final = 1.5;
  r.size = 2;
  r.valid = true;
  r.trace = {{0.0, 0.2}, {0.5, 0.56}};
  return r;
}

}  // namespace

TEST_CASE("negative rendering follows the denial template") {
  auto specs = money_specs();
  RenderedExplanation out = render_negative(money_result(), specs);

  CHECK(out.text ==
        "Your application was denied because your annual income is 30000 and "
        "your current balance is 200. If your annual income had instead been "
        "35000 and your current balance had been 400 and all other values "
        "remained constant, your application would have been approved.");

  REQUIRE(out.explanation.statements.size() == 2);
  // Ordered by |delta|/MAD: income 1.0, balance 0.667.
  CHECK(out.explanation.statements[0].feature == "annual income");
  CHECK(out.explanation.statements[1].feature == "current balance");
  CHECK(out.explanation.statements[0].direction == Direction::increase);
  CHECK(out.explanation.kind == CfKind::negative);
  CHECK(out.explanation.valid);
}

TEST_CASE("ordering is by descending normalised magnitude") {
  auto specs = money_specs();
  CounterfactualResult r = money_result();
  // Make the balance change dominate: 3000/300 = 10 MADs.
  r.x_cf = {31000.0, 3200.0};
  r.deltas = {1000.0, 3000.0};
  RenderedExplanation out = render_negative(r, specs);
  REQUIRE(out.explanation.statements.size() == 2);
  CHECK(out.explanation.statements[0].feature == "current balance");
  CHECK(out.explanation.statements[1].feature == "annual income");
}

TEST_CASE("decrease direction and mixed clauses") {
  auto specs = money_specs();
  CounterfactualResult r = money_result();
  r.x_cf = {25000.0, 400.0};
  r.deltas = {-5000.0, 200.0};
  RenderedExplanation out = render_negative(r, specs);
  CHECK(out.explanation.statements[0].direction == Direction::decrease);
  CHECK(out.text.find("had instead been 25000") != std::string::npos);
}

TEST_CASE("vacuous negative result renders the boundary message") {
  auto specs = money_specs();
  CounterfactualResult r = money_result();
  r.x_cf = r.x_original;
  r.deltas = {0.0, 0.0};
  r.size = 0;
  RenderedExplanation out = render_negative(r, specs);
  CHECK(out.explanation.statements.empty());
  CHECK(out.text.find("already at the decision boundary") != std::string::npos);
}

TEST_CASE("invalid result is flagged as out of budget") {
  auto specs = money_specs();
  CounterfactualResult r = money_result();
  r.valid = false;
  RenderedExplanation out = render_negative(r, specs);
  CHECK(out.text.find("No counterfactual found within budget") !=
        std::string::npos);
  CHECK_FALSE(out.explanation.valid);
}

TEST_CASE("positive rendering emits tolerance lines") {
  std::vector<FeatureSpec> specs(2);
  specs[0] = {"delinquency count", 0.0, 20.0, true, 1.0, false, 0};
  specs[1] = {"utilisation", 0.0, 1.0, true, 0.1, false, 2};

  CounterfactualResult r;
  r.kind = CfKind::positive;
  r.x_original = {1.0, 0.30};
  r.x_cf = {4.0, 0.30};
  r.deltas = {3.0, 0.0};
  r.y_target = 0.5;
  r.y_achieved = 0.51;
  r.valid = true;
  r.size = 1;

  RenderedExplanation out = render_positive(r, specs);
  REQUIRE(out.explanation.statements.size() == 1);
  CHECK(out.explanation.statements[0].direction == Direction::tolerance);
  CHECK(out.text ==
        "Your delinquency count may move from 1 to 4 before approval is at "
        "risk, all else constant.");
}

TEST_CASE("positive boundary instance renders the no-margin message") {
  std::vector<FeatureSpec> specs(1);
  specs[0] = {"x", 0.0, 1.0, true, 0.5, false, 2};
  CounterfactualResult r;
  r.kind = CfKind::positive;
  r.x_original = {0.5};
  r.x_cf = {0.5};
  r.deltas = {0.0};
  r.valid = true;
  RenderedExplanation out = render_positive(r, specs);
  CHECK(out.text == "No margin: application is at the decision boundary.");
}

TEST_CASE("mode mismatch is rejected") {
  auto specs = money_specs();
  CounterfactualResult r = money_result();
  CHECK_THROWS(render_positive(r, specs));
  r.kind = CfKind::positive;
  CHECK_THROWS(render_negative(r, specs));
}

TEST_CASE("json round trip is lossless") {
  auto specs = money_specs();
  RenderedExplanation out = render_negative(money_result(), specs);
  Explanation back =
      explanation_from_json(nlohmann::json::parse(to_json(out.explanation).dump()));
  CHECK(back == out.explanation);

  SUBCASE("empty statements survive") {
    Explanation empty;
    empty.kind = CfKind::positive;
    empty.valid = true;
    empty.achieved_score = 0.5;
    Explanation rt =
        explanation_from_json(nlohmann::json::parse(to_json(empty).dump()));
    CHECK(rt == empty);
    CHECK(to_json(empty)["statements"].is_array());
    CHECK(to_json(empty)["statements"].empty());
  }
  SUBCASE("statement order is preserved") {
    nlohmann::ordered_json j = to_json(out.explanation);
    REQUIRE(j["statements"].size() == 2);
    CHECK(j["statements"][0]["feature"] == "annual income");
    CHECK(j["statements"][1]["feature"] == "current balance");
  }
}

TEST_CASE("every feature named in the text appears in the statements") {
  auto specs = money_specs();
  RenderedExplanation out = render_negative(money_result(), specs);
  for (const Statement& s : out.explanation.statements)
    CHECK(out.text.find(s.feature) != std::string::npos);
}

TEST_CASE("rendering is pure") {
  auto specs = money_specs();
  RenderedExplanation a = render_negative(money_result(), specs);
  RenderedExplanation b = render_negative(money_result(), specs);
  CHECK(a.text == b.text);
  CHECK(a.explanation == b.explanation);
}

TEST_CASE("value formatting uses display decimals") {
  CHECK(format_value(35000.0, 0) == "35000");
  CHECK(format_value(0.3, 2) == "0.30");
  CHECK(format_value(-0.0000001, 2) == "0.00");
  CHECK(format_value(-0.0, 0) == "0");
}
