#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace cfx {

struct FeatureSpec {
  std::string name;
  double lower = 0.0;
  double upper = 0.0;
  bool is_mutable = true;
  double mad = 0.0;
  bool mad_fallback_used = false;
  // Decimal places used when rendering values of this feature in
  // explanations, inferred from the granularity of the training data.
  int display_decimals = 6;
};

// Immutable tabular training set: row-major feature matrix, binary targets
// (1 = accepted) and per-feature metadata. The constructor validates the
// inputs and derives MAD, the MAD fallback and mutability of constant
// columns; after construction the object is safe to share across threads.
class Dataset {
 public:
  // `specs` carries name, bounds and the caller's mutability intent. MAD,
  // the fallback flag and display precision are recomputed here; constant
  // columns are forced immutable because their MAD is zero.
  Dataset(std::vector<double> values, std::vector<int> targets,
          std::vector<FeatureSpec> specs);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return specs_.size(); }

  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * specs_.size(), specs_.size()};
  }
  double at(std::size_t i, std::size_t j) const {
    return values_[i * specs_.size() + j];
  }
  std::vector<double> column(std::size_t j) const;

  const std::vector<int>& targets() const noexcept { return targets_; }
  std::span<const FeatureSpec> specs() const noexcept { return specs_; }
  const FeatureSpec& spec(std::size_t j) const { return specs_[j]; }

  std::size_t count_class(int label) const;
  std::vector<std::size_t> rows_with_class(int label) const;

  std::size_t mutable_count() const;

 private:
  std::size_t rows_ = 0;
  std::vector<double> values_;
  std::vector<int> targets_;
  std::vector<FeatureSpec> specs_;
};

// Median of a sample; even lengths average the two middle elements.
double median(std::vector<double> values);

// Median absolute deviation from the median (the robust per-feature scale
// used by the distance metric). Returns 0 for constant columns; the Dataset
// constructor applies the fallback policy.
double compute_mad(std::span<const double> column);

// Sample Pearson correlation; 0 when either column has zero variance.
double pearson(std::span<const double> a, std::span<const double> b);

// Loads a CSV with a header row. Every non-target cell must be numeric
// (missing values are rejected). The target column may hold any two distinct
// values; the smaller one (numeric if both parse, else lexicographic) maps
// to 0 and the larger to 1. Bounds are inferred as per-column min/max and
// all features start mutable.
Dataset load_csv(const std::string& path, const std::string& target_column);

// Removes exact duplicate rows (features and target), then drops the later
// member of every feature pair with |Pearson r| >= corr_threshold, keeping
// the earlier column. Bounds and MAD are recomputed. Idempotent.
Dataset preprocess(const Dataset& raw, double corr_threshold = 0.95);

// Applies per-feature overrides from a metadata document of the form
//   { "feature_name": {"lower": .., "upper": .., "mutable": true}, ... }
// Unlisted features keep their inferred values; unknown names are an error.
Dataset apply_feature_metadata(const Dataset& d, const nlohmann::json& meta);
Dataset apply_feature_metadata_file(const Dataset& d, const std::string& path);

// Row subset keeping the parent's feature specs (MAD recomputed).
Dataset subset(const Dataset& d, std::span<const std::size_t> row_indices);

}  // namespace cfx
