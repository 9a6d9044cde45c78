#include "cfx/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <utility>

#include <nlohmann/json.hpp>

namespace cfx {

namespace {

// Fallback scale for columns whose MAD collapses to zero on a non-constant
// column: 1.4826 * mean absolute deviation from the mean, the usual
// consistency constant for a normal population.
constexpr double kMadFallbackFactor = 1.4826;

bool column_constant(std::span<const double> col) {
  return std::all_of(col.begin(), col.end(),
                     [&](double v) { return v == col[0]; });
}

int infer_decimals(std::span<const double> col) {
  double scale = 1.0;
  for (int d = 0; d <= 6; ++d, scale *= 10.0) {
    bool ok = true;
    for (double v : col) {
      double s = v * scale;
      if (std::abs(s - std::round(s)) > 1e-9 * std::max(1.0, std::abs(s))) {
        ok = false;
        break;
      }
    }
    if (ok) return d;
  }
  return 6;
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      cells.push_back(trim(std::string_view(line).substr(start, i - start)));
      start = i + 1;
    }
  }
  return cells;
}

bool parse_double(const std::string& cell, double& out) {
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && !cell.empty();
}

}  // namespace

Dataset::Dataset(std::vector<double> values, std::vector<int> targets,
                 std::vector<FeatureSpec> specs)
    : rows_(targets.size()),
      values_(std::move(values)),
      targets_(std::move(targets)),
      specs_(std::move(specs)) {
  const std::size_t p = specs_.size();
  if (p == 0) throw std::invalid_argument("dataset: no features");
  if (rows_ == 0) throw std::invalid_argument("dataset: no rows");
  if (values_.size() != rows_ * p)
    throw std::invalid_argument("dataset: value buffer size mismatch");
  for (double v : values_)
    if (!std::isfinite(v))
      throw std::invalid_argument("dataset: non-finite feature value");

  bool saw0 = false, saw1 = false;
  for (int t : targets_) {
    if (t == 0)
      saw0 = true;
    else if (t == 1)
      saw1 = true;
    else
      throw std::invalid_argument("dataset: target outside {0,1}");
  }
  if (!saw0 || !saw1)
    throw std::invalid_argument("dataset: both classes must be present");

  std::vector<double> col(rows_);
  for (std::size_t j = 0; j < p; ++j) {
    FeatureSpec& s = specs_[j];
    if (!std::isfinite(s.lower) || !std::isfinite(s.upper) || s.lower > s.upper)
      throw std::invalid_argument("dataset: invalid bounds for " + s.name);
    for (std::size_t i = 0; i < rows_; ++i) col[i] = at(i, j);

    s.mad = compute_mad(col);
    s.mad_fallback_used = false;
    if (s.mad == 0.0) {
      if (column_constant(col)) {
        s.is_mutable = false;
      } else {
        double mean = std::accumulate(col.begin(), col.end(), 0.0) /
                      static_cast<double>(rows_);
        double mad_mean = 0.0;
        for (double v : col) mad_mean += std::abs(v - mean);
        mad_mean /= static_cast<double>(rows_);
        s.mad = kMadFallbackFactor * mad_mean;
        s.mad_fallback_used = true;
      }
    }
    s.display_decimals = infer_decimals(col);
  }
}

std::vector<double> Dataset::column(std::size_t j) const {
  std::vector<double> col(rows_);
  for (std::size_t i = 0; i < rows_; ++i) col[i] = at(i, j);
  return col;
}

std::size_t Dataset::count_class(int label) const {
  return static_cast<std::size_t>(
      std::count(targets_.begin(), targets_.end(), label));
}

std::vector<std::size_t> Dataset::rows_with_class(int label) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < rows_; ++i)
    if (targets_[i] == label) out.push_back(i);
  return out;
}

std::size_t Dataset::mutable_count() const {
  return static_cast<std::size_t>(
      std::count_if(specs_.begin(), specs_.end(),
                    [](const FeatureSpec& s) { return s.is_mutable; }));
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median: empty sample");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double compute_mad(std::span<const double> column) {
  if (column.empty()) throw std::invalid_argument("compute_mad: empty column");
  double med = median({column.begin(), column.end()});
  std::vector<double> dev(column.size());
  for (std::size_t i = 0; i < column.size(); ++i)
    dev[i] = std::abs(column[i] - med);
  return median(std::move(dev));
}

double pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty())
    throw std::invalid_argument("pearson: length mismatch");
  const double n = static_cast<double>(a.size());
  double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double da = a[i] - ma, db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

Dataset load_csv(const std::string& path, const std::string& target_column) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_csv: cannot open " + path);

  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("load_csv: empty file " + path);
  std::vector<std::string> header = split_csv_line(line);

  std::size_t target_idx = header.size();
  for (std::size_t j = 0; j < header.size(); ++j)
    if (header[j] == target_column) target_idx = j;
  if (target_idx == header.size())
    throw std::runtime_error("load_csv: target column '" + target_column +
                             "' not found");
  if (header.size() < 2)
    throw std::runtime_error("load_csv: no feature columns");

  const std::size_t p = header.size() - 1;
  std::vector<double> values;
  std::vector<std::string> raw_targets;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != header.size())
      throw std::runtime_error("load_csv: row " + std::to_string(line_no) +
                               " has " + std::to_string(cells.size()) +
                               " cells, expected " +
                               std::to_string(header.size()));
    for (std::size_t j = 0; j < cells.size(); ++j) {
      if (j == target_idx) {
        raw_targets.push_back(cells[j]);
        continue;
      }
      double v;
      if (!parse_double(cells[j], v) || !std::isfinite(v))
        throw std::runtime_error("load_csv: non-numeric cell '" + cells[j] +
                                 "' at row " + std::to_string(line_no) +
                                 ", column " + header[j]);
      values.push_back(v);
    }
  }
  if (raw_targets.empty()) throw std::runtime_error("load_csv: no data rows");

  // Map the two distinct target values onto {0,1}: numeric order if both
  // parse as numbers, lexicographic otherwise.
  std::vector<std::string> distinct;
  for (const auto& t : raw_targets)
    if (std::find(distinct.begin(), distinct.end(), t) == distinct.end())
      distinct.push_back(t);
  if (distinct.size() != 2)
    throw std::runtime_error(
        "load_csv: target column must hold exactly two distinct values, got " +
        std::to_string(distinct.size()));
  double na, nb;
  bool numeric = parse_double(distinct[0], na) && parse_double(distinct[1], nb);
  bool swap = numeric ? (nb < na) : (distinct[1] < distinct[0]);
  if (swap) std::swap(distinct[0], distinct[1]);

  std::vector<int> targets(raw_targets.size());
  for (std::size_t i = 0; i < raw_targets.size(); ++i)
    targets[i] = raw_targets[i] == distinct[1] ? 1 : 0;

  for (int cls = 0; cls <= 1; ++cls) {
    auto cnt = std::count(targets.begin(), targets.end(), cls);
    if (cnt < 2)
      throw std::runtime_error("load_csv: fewer than 2 rows for class " +
                               std::to_string(cls));
  }

  std::vector<FeatureSpec> specs;
  specs.reserve(p);
  const std::size_t n = targets.size();
  std::size_t fj = 0;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (j == target_idx) continue;
    FeatureSpec s;
    s.name = header[j];
    s.lower = values[fj];
    s.upper = values[fj];
    for (std::size_t i = 0; i < n; ++i) {
      double v = values[i * p + fj];
      s.lower = std::min(s.lower, v);
      s.upper = std::max(s.upper, v);
    }
    specs.push_back(std::move(s));
    ++fj;
  }

  return Dataset(std::move(values), std::move(targets), std::move(specs));
}

Dataset preprocess(const Dataset& raw, double corr_threshold) {
  if (!(corr_threshold > 0.0) || corr_threshold > 1.0)
    throw std::invalid_argument("preprocess: corr_threshold must be in (0,1]");

  const std::size_t p = raw.cols();

  // Exact row dedupe (features and target), keeping first occurrences in
  // their original order.
  std::vector<std::size_t> order(raw.rows());
  std::iota(order.begin(), order.end(), 0);
  auto row_less = [&](std::size_t a, std::size_t b) {
    auto ra = raw.row(a), rb = raw.row(b);
    for (std::size_t j = 0; j < p; ++j) {
      if (ra[j] < rb[j]) return true;
      if (ra[j] > rb[j]) return false;
    }
    return raw.targets()[a] < raw.targets()[b];
  };
  auto row_eq = [&](std::size_t a, std::size_t b) {
    return !row_less(a, b) && !row_less(b, a);
  };
  std::stable_sort(order.begin(), order.end(), row_less);
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < order.size(); ++i)
    if (i == 0 || !row_eq(order[i], order[i - 1])) kept.push_back(order[i]);
  std::sort(kept.begin(), kept.end());

  // Correlation filter on the deduplicated rows; the earlier column of each
  // offending pair survives.
  std::vector<std::vector<double>> cols(p, std::vector<double>(kept.size()));
  for (std::size_t j = 0; j < p; ++j)
    for (std::size_t i = 0; i < kept.size(); ++i)
      cols[j][i] = raw.at(kept[i], j);

  std::vector<bool> dropped(p, false);
  for (std::size_t j = 0; j < p; ++j) {
    if (dropped[j]) continue;
    for (std::size_t k = j + 1; k < p; ++k) {
      if (dropped[k]) continue;
      if (std::abs(pearson(cols[j], cols[k])) >= corr_threshold)
        dropped[k] = true;
    }
  }
  std::vector<std::size_t> keep_cols;
  for (std::size_t j = 0; j < p; ++j)
    if (!dropped[j]) keep_cols.push_back(j);
  if (keep_cols.empty())
    throw std::runtime_error("preprocess: all features dropped");

  std::vector<double> values;
  values.reserve(kept.size() * keep_cols.size());
  std::vector<int> targets;
  targets.reserve(kept.size());
  for (std::size_t i : kept) {
    for (std::size_t j : keep_cols) values.push_back(raw.at(i, j));
    targets.push_back(raw.targets()[i]);
  }

  std::vector<FeatureSpec> specs;
  for (std::size_t j : keep_cols) {
    FeatureSpec s;
    s.name = raw.spec(j).name;
    s.is_mutable = raw.spec(j).is_mutable;
    double lo = cols[j][0], hi = cols[j][0];
    for (double v : cols[j]) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    s.lower = lo;
    s.upper = hi;
    specs.push_back(std::move(s));
  }

  return Dataset(std::move(values), std::move(targets), std::move(specs));
}

Dataset apply_feature_metadata(const Dataset& d, const nlohmann::json& meta) {
  if (!meta.is_object())
    throw std::runtime_error("feature metadata: top level must be an object");

  std::vector<FeatureSpec> specs(d.specs().begin(), d.specs().end());
  for (auto it = meta.begin(); it != meta.end(); ++it) {
    auto match = std::find_if(specs.begin(), specs.end(),
                              [&](const FeatureSpec& s) { return s.name == it.key(); });
    if (match == specs.end())
      throw std::runtime_error("feature metadata: unknown feature '" +
                               it.key() + "'");
    const nlohmann::json& entry = it.value();
    if (!entry.is_object())
      throw std::runtime_error("feature metadata: entry for '" + it.key() +
                               "' must be an object");
    if (entry.contains("lower")) match->lower = entry.at("lower").get<double>();
    if (entry.contains("upper")) match->upper = entry.at("upper").get<double>();
    if (entry.contains("mutable"))
      match->is_mutable = entry.at("mutable").get<bool>();
    if (match->lower > match->upper)
      throw std::runtime_error("feature metadata: lower > upper for '" +
                               it.key() + "'");
  }

  std::vector<double> values;
  values.reserve(d.rows() * d.cols());
  for (std::size_t i = 0; i < d.rows(); ++i)
    values.insert(values.end(), d.row(i).begin(), d.row(i).end());
  return Dataset(std::move(values), d.targets(), std::move(specs));
}

Dataset apply_feature_metadata_file(const Dataset& d, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("feature metadata: cannot open " + path);
  nlohmann::json meta = nlohmann::json::parse(in);
  return apply_feature_metadata(d, meta);
}

Dataset subset(const Dataset& d, std::span<const std::size_t> row_indices) {
  if (row_indices.empty()) throw std::invalid_argument("subset: empty");
  std::vector<double> values;
  values.reserve(row_indices.size() * d.cols());
  std::vector<int> targets;
  targets.reserve(row_indices.size());
  for (std::size_t i : row_indices) {
    values.insert(values.end(), d.row(i).begin(), d.row(i).end());
    targets.push_back(d.targets()[i]);
  }
  std::vector<FeatureSpec> specs(d.specs().begin(), d.specs().end());
  return Dataset(std::move(values), std::move(targets), std::move(specs));
}

}  // namespace cfx
