#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace iefsvm {

/// Binary classification dataset.  Labels are +1 for the minority class and
/// -1 for the majority class; features are stored row-major.
struct Dataset {
  std::string name;
  std::vector<double> features;  ///< n_samples * n_features, row-major
  std::vector<int> labels;       ///< +1 or -1 per sample
  std::size_t n_samples = 0;
  std::size_t n_features = 0;

  Dataset() = default;
  Dataset(std::string name, std::vector<double> features, std::vector<int> labels,
          std::size_t n_features);

  std::span<const double> row(std::size_t i) const {
    return {features.data() + i * n_features, n_features};
  }
};

/// Class counts and the imbalance ratio n_neg / n_pos (>= 1 by convention).
struct ImbalanceInfo {
  std::size_t n_pos = 0;
  std::size_t n_neg = 0;
  double ir = 1.0;
};

struct CsvOptions {
  bool has_header = true;
};

/// Loads a numeric CSV.  label_column selects the label column by header name
/// or by zero-based index; samples whose raw label equals minority_label are
/// mapped to +1, all others to -1.  Rows with missing or non-numeric feature
/// values are rejected.
Dataset load_csv(const std::string& path, const std::string& label_column,
                 const std::string& minority_label, const CsvOptions& opts = {});

/// Feature table without label mapping, for scoring new samples.  When
/// label_column is non-empty that column is split off and returned verbatim.
struct FeatureTable {
  std::vector<double> features;
  std::size_t n_samples = 0;
  std::size_t n_features = 0;
  std::vector<std::string> raw_labels;  ///< empty unless a label column was named
};
FeatureTable load_feature_csv(const std::string& path, const std::string& label_column,
                              const CsvOptions& opts = {});

/// Per-column min/max recorded so the same affine map can be applied later.
struct MinMaxScaler {
  std::vector<double> col_min;
  std::vector<double> col_max;
};

MinMaxScaler fit_minmax(const Dataset& ds);
Dataset apply_minmax(const Dataset& ds, const MinMaxScaler& scaler);
void apply_minmax_rows(std::vector<double>& features, std::size_t n_features,
                       const MinMaxScaler& scaler);

/// Maps every column onto [-1, 1]; constant columns map to 0.
Dataset normalize_minmax(const Dataset& ds);

ImbalanceInfo imbalance_info(const Dataset& ds);

struct FoldSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Deterministic stratified k-fold split; each class is spread over the folds
/// as evenly as possible and every sample lands in exactly one test fold.
std::vector<FoldSplit> stratified_folds(const Dataset& ds, std::size_t folds,
                                        std::uint64_t seed);

/// Keeps every minority sample and a uniformly drawn majority subset of equal
/// size; the surviving rows stay in their original order.
Dataset undersample_majority(const Dataset& ds, std::uint64_t seed);

Dataset subset(const Dataset& ds, std::span<const std::size_t> indices);

}  // namespace iefsvm
