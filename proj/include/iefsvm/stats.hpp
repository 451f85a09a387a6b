#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace iefsvm {

struct WilcoxonResult {
  double statistic = 0.0;  ///< min of the positive and negative rank sums
  double z = 0.0;          ///< normal approximation, tie-corrected variance
  double p = 0.0;          ///< two-sided
  std::size_t n_nonzero = 0;
};

/// Paired signed-rank test.  Zero differences are dropped, tied absolute
/// differences share average ranks, and at least 5 nonzero differences are
/// required for the normal approximation.
WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& a,
                                    const std::vector<double>& b);

struct HolmRow {
  std::string method;
  double z = 0.0;  ///< positive when the champion ranks better
  double p = 0.0;  ///< one-sided normal tail
  double adjusted_alpha = 0.0;
  bool rejected = false;
};

/// Average-rank comparison of every method against a champion over
/// n_datasets datasets.  Rows come back sorted by descending z; the i-th row
/// (1-based) is tested at alpha / (m - i + 1) and rejections stop at the
/// first non-significant row.
std::vector<HolmRow> holm_test(const std::vector<std::pair<std::string, double>>& avg_ranks,
                               const std::string& champion, std::size_t n_datasets,
                               double alpha = 0.05);

}  // namespace iefsvm
