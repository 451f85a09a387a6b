#include "iefsvm/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "iefsvm/util.hpp"

namespace iefsvm {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  std::stringstream ss(line);
  while (std::getline(ss, cur, ',')) cells.push_back(trim(cur));
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* b = s.data();
  const char* e = b + s.size();
  auto res = std::from_chars(b, e, out);
  return res.ec == std::errc() && res.ptr == e && std::isfinite(out);
}

std::string stem_of(const std::string& path) {
  std::size_t slash = path.find_last_of("/\\");
  std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
  std::size_t dot = base.find_last_of('.');
  return dot == std::string::npos ? base : base.substr(0, dot);
}

struct RawCsv {
  std::vector<std::string> header;  // empty when the file has none
  std::vector<std::vector<std::string>> rows;
  std::size_t n_cols = 0;
};

RawCsv read_csv(const std::string& path, const CsvOptions& opts) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  RawCsv raw;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    auto cells = split_csv_line(line);
    if (first && opts.has_header) {
      raw.header = cells;
      raw.n_cols = cells.size();
      first = false;
      continue;
    }
    first = false;
    if (raw.n_cols == 0) raw.n_cols = cells.size();
    if (cells.size() != raw.n_cols) {
      throw std::runtime_error(path + ": row " + std::to_string(raw.rows.size() + 1) +
                               " has " + std::to_string(cells.size()) +
                               " cells, expected " + std::to_string(raw.n_cols));
    }
    raw.rows.push_back(std::move(cells));
  }
  if (raw.rows.empty()) throw std::runtime_error(path + ": no data rows");
  return raw;
}

// Resolves a column either by header name or by zero-based index.
std::size_t resolve_column(const RawCsv& raw, const std::string& column,
                           const std::string& path) {
  if (!raw.header.empty()) {
    for (std::size_t j = 0; j < raw.header.size(); ++j) {
      if (raw.header[j] == column) return j;
    }
  }
  std::size_t idx = 0;
  auto res = std::from_chars(column.data(), column.data() + column.size(), idx);
  if (res.ec == std::errc() && res.ptr == column.data() + column.size() &&
      idx < raw.n_cols) {
    return idx;
  }
  throw std::runtime_error(path + ": label column '" + column + "' not found");
}

double parse_feature_cell(const RawCsv& raw, const std::string& path, std::size_t r,
                          std::size_t c) {
  double v = 0.0;
  if (!parse_double(raw.rows[r][c], v)) {
    std::string col = raw.header.empty() ? std::to_string(c) : raw.header[c];
    throw std::runtime_error(path + ": non-numeric value at row " +
                             std::to_string(r + 1) + ", column " + col);
  }
  return v;
}

}  // namespace

Dataset::Dataset(std::string name_, std::vector<double> features_,
                 std::vector<int> labels_, std::size_t n_features_)
    : name(std::move(name_)),
      features(std::move(features_)),
      labels(std::move(labels_)),
      n_samples(labels.size()),
      n_features(n_features_) {
  if (n_samples == 0) throw std::invalid_argument("dataset has no samples");
  if (n_features == 0) throw std::invalid_argument("dataset has no features");
  if (features.size() != n_samples * n_features) {
    throw std::invalid_argument("feature matrix shape does not match labels");
  }
  for (double v : features) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite feature value");
  }
  for (int y : labels) {
    if (y != 1 && y != -1) throw std::invalid_argument("labels must be +1 or -1");
  }
}

Dataset load_csv(const std::string& path, const std::string& label_column,
                 const std::string& minority_label, const CsvOptions& opts) {
  RawCsv raw = read_csv(path, opts);
  std::size_t label_idx = resolve_column(raw, label_column, path);
  if (raw.n_cols < 2) throw std::runtime_error(path + ": need at least one feature column");

  std::set<std::string> distinct;
  for (const auto& row : raw.rows) distinct.insert(row[label_idx]);
  if (raw.rows.size() >= 2 && distinct.size() < 2) {
    throw std::runtime_error(path + ": fewer than 2 distinct labels in column '" +
                             label_column + "'");
  }

  const std::size_t n = raw.rows.size();
  const std::size_t d = raw.n_cols - 1;
  std::vector<double> features;
  features.reserve(n * d);
  std::vector<int> labels;
  labels.reserve(n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < raw.n_cols; ++c) {
      if (c == label_idx) continue;
      features.push_back(parse_feature_cell(raw, path, r, c));
    }
    labels.push_back(raw.rows[r][label_idx] == minority_label ? 1 : -1);
  }
  return Dataset(stem_of(path), std::move(features), std::move(labels), d);
}

FeatureTable load_feature_csv(const std::string& path, const std::string& label_column,
                              const CsvOptions& opts) {
  RawCsv raw = read_csv(path, opts);
  std::size_t label_idx = raw.n_cols;  // out of range = keep every column
  if (!label_column.empty()) label_idx = resolve_column(raw, label_column, path);
  if (raw.n_cols == 0 || (label_idx < raw.n_cols && raw.n_cols < 2)) {
    throw std::runtime_error(path + ": need at least one feature column");
  }

  FeatureTable table;
  table.n_samples = raw.rows.size();
  table.n_features = label_idx < raw.n_cols ? raw.n_cols - 1 : raw.n_cols;
  table.features.reserve(table.n_samples * table.n_features);
  for (std::size_t r = 0; r < table.n_samples; ++r) {
    for (std::size_t c = 0; c < raw.n_cols; ++c) {
      if (c == label_idx) continue;
      table.features.push_back(parse_feature_cell(raw, path, r, c));
    }
    if (label_idx < raw.n_cols) table.raw_labels.push_back(raw.rows[r][label_idx]);
  }
  return table;
}

MinMaxScaler fit_minmax(const Dataset& ds) {
  MinMaxScaler s;
  s.col_min.assign(ds.n_features, 0.0);
  s.col_max.assign(ds.n_features, 0.0);
  for (std::size_t j = 0; j < ds.n_features; ++j) {
    double lo = ds.features[j];
    double hi = ds.features[j];
    for (std::size_t i = 1; i < ds.n_samples; ++i) {
      double v = ds.features[i * ds.n_features + j];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    s.col_min[j] = lo;
    s.col_max[j] = hi;
  }
  return s;
}

void apply_minmax_rows(std::vector<double>& features, std::size_t n_features,
                       const MinMaxScaler& scaler) {
  if (scaler.col_min.size() != n_features || scaler.col_max.size() != n_features) {
    throw std::invalid_argument("scaler dimension does not match features");
  }
  const std::size_t n = n_features == 0 ? 0 : features.size() / n_features;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n_features; ++j) {
      double& v = features[i * n_features + j];
      double lo = scaler.col_min[j];
      double hi = scaler.col_max[j];
      v = hi > lo ? 2.0 * (v - lo) / (hi - lo) - 1.0 : 0.0;
    }
  }
}

Dataset apply_minmax(const Dataset& ds, const MinMaxScaler& scaler) {
  Dataset out = ds;
  apply_minmax_rows(out.features, out.n_features, scaler);
  return out;
}

Dataset normalize_minmax(const Dataset& ds) { return apply_minmax(ds, fit_minmax(ds)); }

ImbalanceInfo imbalance_info(const Dataset& ds) {
  ImbalanceInfo info;
  for (int y : ds.labels) (y > 0 ? info.n_pos : info.n_neg)++;
  if (info.n_pos == 0 || info.n_neg == 0) {
    throw std::runtime_error("dataset '" + ds.name + "' contains a single class");
  }
  if (info.n_pos > info.n_neg) {
    throw std::runtime_error("dataset '" + ds.name +
                             "': minority (+1) class outnumbers the majority");
  }
  info.ir = static_cast<double>(info.n_neg) / static_cast<double>(info.n_pos);
  return info;
}

std::vector<FoldSplit> stratified_folds(const Dataset& ds, std::size_t folds,
                                        std::uint64_t seed) {
  if (folds < 2) throw std::invalid_argument("stratified_folds: need at least 2 folds");
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < ds.n_samples; ++i) {
    (ds.labels[i] > 0 ? pos : neg).push_back(i);
  }
  if (pos.size() < folds || neg.size() < folds) {
    throw std::runtime_error("stratified_folds: every class needs at least " +
                             std::to_string(folds) + " samples");
  }

  Rng rng(mix_seed(seed, 0x5f01d5));
  shuffle_vec(pos, rng);
  shuffle_vec(neg, rng);

  std::vector<FoldSplit> out(folds);
  auto deal = [&](const std::vector<std::size_t>& cls) {
    const std::size_t base = cls.size() / folds;
    const std::size_t extra = cls.size() % folds;
    std::size_t offset = 0;
    for (std::size_t f = 0; f < folds; ++f) {
      std::size_t take = base + (f < extra ? 1 : 0);
      for (std::size_t t = 0; t < take; ++t) out[f].test.push_back(cls[offset + t]);
      offset += take;
    }
  };
  deal(pos);
  deal(neg);

  std::vector<char> in_test(ds.n_samples, 0);
  for (auto& split : out) {
    std::sort(split.test.begin(), split.test.end());
    std::fill(in_test.begin(), in_test.end(), 0);
    for (std::size_t i : split.test) in_test[i] = 1;
    for (std::size_t i = 0; i < ds.n_samples; ++i) {
      if (!in_test[i]) split.train.push_back(i);
    }
  }
  return out;
}

Dataset undersample_majority(const Dataset& ds, std::uint64_t seed) {
  ImbalanceInfo info = imbalance_info(ds);
  std::vector<std::size_t> maj;
  for (std::size_t i = 0; i < ds.n_samples; ++i) {
    if (ds.labels[i] < 0) maj.push_back(i);
  }
  Rng rng(mix_seed(seed, 0xd09e));
  shuffle_vec(maj, rng);
  std::vector<char> keep(ds.n_samples, 0);
  for (std::size_t i = 0; i < ds.n_samples; ++i) {
    if (ds.labels[i] > 0) keep[i] = 1;
  }
  for (std::size_t t = 0; t < info.n_pos; ++t) keep[maj[t]] = 1;

  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < ds.n_samples; ++i) {
    if (keep[i]) rows.push_back(i);
  }
  return subset(ds, rows);
}

Dataset subset(const Dataset& ds, std::span<const std::size_t> indices) {
  if (indices.empty()) throw std::invalid_argument("subset: no indices");
  std::vector<double> features;
  features.reserve(indices.size() * ds.n_features);
  std::vector<int> labels;
  labels.reserve(indices.size());
  for (std::size_t i : indices) {
    if (i >= ds.n_samples) throw std::out_of_range("subset: index out of range");
    auto r = ds.row(i);
    features.insert(features.end(), r.begin(), r.end());
    labels.push_back(ds.labels[i]);
  }
  return Dataset(ds.name, std::move(features), std::move(labels), ds.n_features);
}

}  // namespace iefsvm
