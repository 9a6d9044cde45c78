#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <limits>
#include <random>

#include "cfx/distance.hpp"
#include "helpers.hpp"

using namespace cfx;

namespace {

std::vector<FeatureSpec> specs_with_mads(const std::vector<double>& mads) {
  std::vector<FeatureSpec> specs(mads.size());
  for (std::size_t j = 0; j < mads.size(); ++j) {
    specs[j].name = "f" + std::to_string(j);
    specs[j].lower = -100.0;
    specs[j].upper = 100.0;
    specs[j].mad = mads[j];
  }
  return specs;
}

}  // namespace

TEST_CASE("mad_distance hand cases") {
  auto specs = specs_with_mads({1.0, 2.0});
  CHECK(mad_distance(std::vector<double>{3, 4}, std::vector<double>{3, 4},
                     specs) == 0.0);
  // deltas (1, 2), MADs (1, 2): 1/1 + 2/2 = 2
  CHECK(test::rel_err(mad_distance(std::vector<double>{0, 0},
                                   std::vector<double>{1, 2}, specs),
                      2.0) < 1e-15);
}

TEST_CASE("weighted_distance hand cases") {
  auto specs = specs_with_mads({1.0, 2.0});
  WeightVector ones = WeightVector::uniform(specs);
  std::vector<double> x{0, 0}, xp{1, 2};
  CHECK(weighted_distance(x, xp, specs, ones) == mad_distance(x, xp, specs));

  // theta zero on the only differing feature annihilates the distance.
  auto specs1 = specs_with_mads({1.0, 1.0});
  WeightVector skewed;
  skewed.theta = {0.0, 2.0};
  CHECK(weighted_distance(std::vector<double>{0, 5}, std::vector<double>{3, 5},
                          specs1, skewed) == 0.0);

  // theta (2, 0.5) with unit per-feature terms sums to 2.5.
  WeightVector theta;
  theta.theta = {2.0, 0.5};
  CHECK(test::rel_err(weighted_distance(std::vector<double>{0, 0},
                                        std::vector<double>{1, 2}, specs,
                                        theta),
                      2.5) < 1e-15);
}

TEST_CASE("distances match the brute-force oracles on random pairs") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  std::uniform_real_distribution<double> mad_dist(0.1, 4.0);
  std::uniform_real_distribution<double> w(0.0, 3.0);

  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t p = 1 + static_cast<std::size_t>(trial % 40);
    std::vector<double> mads(p), x(p), xp(p), theta(p);
    for (std::size_t j = 0; j < p; ++j) {
      mads[j] = mad_dist(rng);
      x[j] = u(rng);
      xp[j] = u(rng);
      theta[j] = w(rng);
    }
    auto specs = specs_with_mads(mads);
    CHECK(test::rel_err(mad_distance(x, xp, specs),
                        test::oracle_mad_distance(x, xp, specs)) < 1e-12);
    WeightVector wv;
    wv.theta = theta;
    CHECK(test::rel_err(weighted_distance(x, xp, specs, wv),
                        test::oracle_weighted_distance(x, xp, specs, theta)) <
          1e-12);
  }
}

TEST_CASE("metric properties") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  auto specs = specs_with_mads({0.5, 1.0, 2.0, 0.25});

  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> x(4), y(4), z(4);
    for (std::size_t j = 0; j < 4; ++j) {
      x[j] = u(rng);
      y[j] = u(rng);
      z[j] = u(rng);
    }
    const double dxy = mad_distance(x, y, specs);
    const double dyx = mad_distance(y, x, specs);
    const double dxz = mad_distance(x, z, specs);
    const double dzy = mad_distance(z, y, specs);
    CHECK(dxy == dyx);       // symmetry
    CHECK(dxy >= 0.0);       // nonnegativity
    CHECK(dxy <= dxz + dzy + 1e-12);  // triangle inequality

    WeightVector wv;
    wv.theta = {1.5, 0.5, 1.0, 1.0};
    CHECK(weighted_distance(x, y, specs, wv) ==
          weighted_distance(y, x, specs, wv));
  }

  SUBCASE("identity of indiscernibles over mutable features") {
    std::vector<double> x{1, 2, 3, 4};
    CHECK(mad_distance(x, x, specs) == 0.0);
    std::vector<double> y{1, 2, 3.001, 4};
    CHECK(mad_distance(x, y, specs) > 0.0);
  }
}

TEST_CASE("weighted_distance is linear in each theta entry") {
  auto specs = specs_with_mads({1.0, 3.0, 0.5});
  std::vector<double> x{0, 0, 0}, xp{1, -2, 0.5};
  WeightVector base;
  base.theta = {1.0, 1.0, 1.0};
  for (std::size_t j = 0; j < 3; ++j) {
    WeightVector bumped = base;
    bumped.theta[j] *= 3.0;
    const double before = weighted_distance(x, xp, specs, base);
    const double after = weighted_distance(x, xp, specs, bumped);
    const double term = std::fabs(x[j] - xp[j]) / specs[j].mad * base.theta[j];
    CHECK(test::rel_err(after, before + 2.0 * term) < 1e-12);
  }
}

TEST_CASE("immutable features never contribute") {
  auto specs = specs_with_mads({1.0, 1.0});
  specs[0].is_mutable = false;
  specs[0].mad = 0.0;  // constant column would have MAD 0
  std::vector<double> x{0, 0}, xp{100, 1};
  CHECK(mad_distance(x, xp, specs) == 1.0);
  WeightVector wv = WeightVector::uniform(specs);
  CHECK(weighted_distance(x, xp, specs, wv) == 1.0);
}

TEST_CASE("distance error paths") {
  auto specs = specs_with_mads({1.0, 1.0});
  std::vector<double> x{0, 0}, bad{1};
  CHECK_THROWS(mad_distance(x, bad, specs));
  std::vector<double> inf{std::numeric_limits<double>::infinity(), 0};
  CHECK_THROWS(mad_distance(x, inf, specs));
  WeightVector wv;
  wv.theta = {1.0};
  CHECK_THROWS(weighted_distance(x, x, specs, wv));
}

TEST_CASE("WeightVector construction and validation") {
  auto specs = specs_with_mads({1.0, 1.0, 1.0, 1.0});
  specs[2].is_mutable = false;

  WeightVector w = WeightVector::from_raw({2.0, 1.0, 9.0, 1.0}, specs);
  CHECK(w.theta[2] == 0.0);
  // Mean over the three mutable entries is 1.
  CHECK(test::rel_err((w.theta[0] + w.theta[1] + w.theta[3]) / 3.0, 1.0) <
        1e-12);
  w.validate(specs);

  WeightVector uniform = WeightVector::uniform(specs);
  CHECK(uniform.theta == std::vector<double>{1.0, 1.0, 0.0, 1.0});
  uniform.validate(specs);

  CHECK_THROWS(WeightVector::from_raw({-1.0, 1.0, 1.0, 1.0}, specs));
  CHECK_THROWS(WeightVector::from_raw({0.0, 0.0, 1.0, 0.0}, specs));
  WeightVector bad;
  bad.theta = {2.0, 2.0, 0.0, 2.0};
  CHECK_THROWS(bad.validate(specs));
}

TEST_CASE("change threshold arithmetic") {
  FeatureSpec s;
  s.mad = 2.0;
  CHECK(change_threshold(s) == 2e-3);
  s.mad = 0.0;
  CHECK(change_threshold(s) == 1e-9);

  auto specs = specs_with_mads({1.0, 1.0});
  CHECK(changed_feature_count(std::vector<double>{2.0, 1e-6}, specs) == 1);
  CHECK(changed_feature_count(std::vector<double>{0.0, 0.0}, specs) == 0);
}
