#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>

#include <nlohmann/json.hpp>

#include "cfx/dataset.hpp"
#include "cfx/synthetic.hpp"
#include "cfx/weights.hpp"
#include "helpers.hpp"

using namespace cfx;

namespace {

// Unique temp file that removes itself.
struct TempFile {
  std::filesystem::path path;
  explicit TempFile(const std::string& name, const std::string& contents) {
    path = std::filesystem::temp_directory_path() /
           ("cfx_test_" + std::to_string(::getpid()) + "_" + name);
    std::ofstream out(path);
    out << contents;
  }
  ~TempFile() { std::filesystem::remove(path); }
};

bool datasets_equal(const Dataset& a, const Dataset& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  if (a.targets() != b.targets()) return false;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (a.at(i, j) != b.at(i, j)) return false;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    if (a.spec(j).name != b.spec(j).name) return false;
    if (a.spec(j).mad != b.spec(j).mad) return false;
    if (a.spec(j).is_mutable != b.spec(j).is_mutable) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("compute_mad hand cases") {
  // median 3, deviations {2,1,0,1,2}, median 1
  CHECK(compute_mad(std::vector<double>{1, 2, 3, 4, 5}) == 1.0);
  CHECK(compute_mad(std::vector<double>{7, 7, 7}) == 0.0);
  // even length: median of {1,2,3,4} is 2.5, deviations {1.5,0.5,0.5,1.5},
  // median (0.5+1.5)/2 = 1
  CHECK(compute_mad(std::vector<double>{1, 2, 3, 4}) == 1.0);
}

TEST_CASE("compute_mad matches the brute-force double-median oracle") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> col(100);
    for (double& v : col) v = u(rng);
    CHECK(test::rel_err(compute_mad(col), test::oracle_mad(col)) < 1e-12);
  }
}

TEST_CASE("compute_mad permutation invariance and scale equivariance") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::vector<double> col(101);
  for (double& v : col) v = u(rng);

  std::vector<double> shuffled = col;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  CHECK(compute_mad(col) == compute_mad(shuffled));

  for (double c : {-3.5, -1.0, 0.0, 0.25, 7.0}) {
    std::vector<double> scaled(col.size());
    for (std::size_t i = 0; i < col.size(); ++i) scaled[i] = c * col[i];
    CHECK(test::rel_err(compute_mad(scaled), std::fabs(c) * compute_mad(col)) <
          1e-12);
  }
}

TEST_CASE("load_csv parses a small file") {
  TempFile csv("small.csv",
               "a,b,target\n"
               "1,10,0\n"
               "2,20,1\n"
               "3,30,0\n"
               "4,40,1\n");
  Dataset d = load_csv(csv.path.string(), "target");
  CHECK(d.rows() == 4);
  CHECK(d.cols() == 2);
  CHECK(d.spec(0).name == "a");
  CHECK(d.spec(1).name == "b");
  CHECK(d.targets() == std::vector<int>{0, 1, 0, 1});
  CHECK(d.spec(0).lower == 1.0);
  CHECK(d.spec(0).upper == 4.0);
  CHECK(d.spec(1).mad == compute_mad(d.column(1)));

  SUBCASE("bounds cover every cell") {
    for (std::size_t j = 0; j < d.cols(); ++j)
      for (std::size_t i = 0; i < d.rows(); ++i) {
        CHECK(d.at(i, j) >= d.spec(j).lower);
        CHECK(d.at(i, j) <= d.spec(j).upper);
      }
  }
}

TEST_CASE("load_csv maps string targets by lexicographic order") {
  TempFile csv("labels.csv",
               "x,RiskPerformance\n"
               "1,Bad\n"
               "2,Good\n"
               "3,Bad\n"
               "4,Good\n");
  Dataset d = load_csv(csv.path.string(), "RiskPerformance");
  // "Bad" < "Good" so Good becomes the positive class.
  CHECK(d.targets() == std::vector<int>{0, 1, 0, 1});
}

TEST_CASE("load_csv error paths") {
  CHECK_THROWS(load_csv("/nonexistent/file.csv", "target"));

  TempFile one_class("one_class.csv", "a,target\n1,1\n2,1\n3,1\n");
  CHECK_THROWS(load_csv(one_class.path.string(), "target"));

  TempFile bad_cell("bad_cell.csv", "a,target\n1,0\noops,1\n2,0\n3,1\n");
  CHECK_THROWS(load_csv(bad_cell.path.string(), "target"));

  TempFile missing("missing.csv", "a,target\n1,0\n,1\n2,0\n3,1\n");
  CHECK_THROWS(load_csv(missing.path.string(), "target"));

  TempFile ok("ok.csv", "a,target\n1,0\n2,1\n3,0\n4,1\n");
  CHECK_THROWS(load_csv(ok.path.string(), "nope"));
}

TEST_CASE("preprocess drops duplicated columns and rows") {
  // Column f1 duplicates f0 exactly (r = 1); rows 0 and 3 are identical.
  std::vector<std::vector<double>> rows = {
      {1, 1, 5}, {2, 2, 9}, {3, 3, 2}, {1, 1, 5}, {4, 4, 7}, {5, 5, 1},
  };
  Dataset d = test::make_dataset(rows, {0, 1, 0, 0, 1, 1});
  Dataset pp = preprocess(d, 0.95);
  CHECK(pp.rows() == 5);
  CHECK(pp.cols() == 2);
  // The earlier column of the pair survives.
  CHECK(pp.spec(0).name == "f0");
  CHECK(pp.spec(1).name == "f2");
}

TEST_CASE("preprocess keeps independent noise columns") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::vector<double>> rows(300, std::vector<double>(4));
  std::vector<int> targets(300);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (double& v : rows[i]) v = u(rng);
    targets[i] = static_cast<int>(i % 2);
  }
  Dataset d = test::make_dataset(rows, targets);

  // Brute-force check that the sample correlations really are sub-threshold.
  for (std::size_t j = 0; j < 4; ++j)
    for (std::size_t k = j + 1; k < 4; ++k)
      CHECK(std::fabs(pearson(d.column(j), d.column(k))) < 0.95);

  Dataset pp = preprocess(d, 0.95);
  CHECK(pp.cols() == 4);
  CHECK(pp.rows() == 300);
}

TEST_CASE("preprocess is idempotent") {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::vector<double>> rows(100, std::vector<double>(3));
  std::vector<int> targets(100);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i][0] = u(rng);
    rows[i][1] = rows[i][0] * 2.0;  // perfectly correlated
    rows[i][2] = u(rng);
    targets[i] = static_cast<int>(i % 2);
  }
  rows[50] = rows[49];
  targets[50] = targets[49];
  Dataset d = test::make_dataset(rows, targets);
  Dataset once = preprocess(d, 0.9);
  Dataset twice = preprocess(once, 0.9);
  CHECK(datasets_equal(once, twice));
}

TEST_CASE("preprocess rejects a bad threshold") {
  Dataset d = test::make_dataset({{1, 2}, {2, 1}, {3, 4}, {4, 3}}, {0, 1, 0, 1});
  CHECK_THROWS(preprocess(d, 0.0));
  CHECK_THROWS(preprocess(d, 1.5));
}

TEST_CASE("dataset constructor enforces invariants") {
  CHECK_THROWS(test::make_dataset({{1, 2}, {3, 4}}, {0, 0}));  // one class
  std::vector<FeatureSpec> specs(1);
  specs[0].name = "a";
  specs[0].lower = 0;
  specs[0].upper = 1;
  CHECK_THROWS(Dataset({0.5, 0.7, 0.2}, {0, 1, 2}, specs));   // bad target
  CHECK_THROWS(Dataset({0.5, 0.7}, {0, 1, 0}, specs));        // size mismatch
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS(Dataset({nan, 0.7, 0.2}, {0, 1, 0}, specs));   // non-finite
}

TEST_CASE("MAD fallback policy") {
  SUBCASE("constant column becomes immutable with zero MAD") {
    Dataset d =
        test::make_dataset({{1, 5}, {2, 5}, {3, 5}, {4, 5}}, {0, 1, 0, 1});
    CHECK(d.spec(1).mad == 0.0);
    CHECK_FALSE(d.spec(1).is_mutable);
    CHECK(d.spec(0).is_mutable);
  }
  SUBCASE("zero MAD on a non-constant column takes the mean-based fallback") {
    // Median 5, more than half the deviations are 0 -> MAD 0, not constant.
    Dataset d = test::make_dataset(
        {{5, 1}, {5, 2}, {5, 3}, {5, 4}, {5, 5}, {9, 6}, {1, 7}},
        {0, 1, 0, 1, 0, 1, 0});
    CHECK(d.spec(0).mad > 0.0);
    CHECK(d.spec(0).mad_fallback_used);
    CHECK(d.spec(0).is_mutable);
    // 1.4826 * mean |x - mean|; mean = 5, deviations {0,0,0,0,0,4,4}.
    CHECK(test::rel_err(d.spec(0).mad, 1.4826 * (8.0 / 7.0)) < 1e-12);
  }
}

TEST_CASE("feature metadata overrides") {
  Dataset d =
      test::make_dataset({{1, 10}, {2, 20}, {3, 30}, {4, 40}}, {0, 1, 0, 1});
  nlohmann::json meta = {
      {"f0", {{"mutable", false}}},
      {"f1", {{"lower", 0.0}, {"upper", 100.0}}},
  };
  Dataset over = apply_feature_metadata(d, meta);
  CHECK_FALSE(over.spec(0).is_mutable);
  CHECK(over.spec(1).lower == 0.0);
  CHECK(over.spec(1).upper == 100.0);
  CHECK(over.spec(1).is_mutable);

  CHECK_THROWS(apply_feature_metadata(d, nlohmann::json{{"nope", {{"mutable", false}}}}));
  CHECK_THROWS(apply_feature_metadata(
      d, nlohmann::json{{"f0", {{"lower", 5.0}, {"upper", 1.0}}}}));
}

TEST_CASE("gen_synthetic is deterministic and labelled sanely") {
  Dataset a = gen_synthetic(2000, 20, 7);
  Dataset b = gen_synthetic(2000, 20, 7);
  CHECK(datasets_equal(a, b));
  CHECK(a.rows() == 2000);
  CHECK(a.cols() == 20);
  CHECK(a.count_class(1) == 1000);

  SUBCASE("informative features carry signal, noise features do not") {
    // Default informative count for p=20 is 4 (p/5).
    const double f_info = anova_f(a, 0);
    const double f_noise = anova_f(a, 19);
    CHECK(f_info > 10.0 * f_noise);
    CHECK(f_info > 100.0);
  }
  SUBCASE("preconditions") {
    CHECK_THROWS(gen_synthetic(50, 20, 7));
    CHECK_THROWS(gen_synthetic(200, 1, 7));
  }
}

TEST_CASE("subset keeps specs and recomputes MAD") {
  Dataset d = gen_synthetic(200, 4, 1);
  std::vector<std::size_t> rows = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  Dataset s = subset(d, rows);
  CHECK(s.rows() == 10);
  CHECK(s.cols() == 4);
  CHECK(s.spec(0).name == d.spec(0).name);
  CHECK(s.spec(0).mad == compute_mad(s.column(0)));
}
