#include "iefsvm/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "iefsvm/util.hpp"

namespace iefsvm {

WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& a,
                                    const std::vector<double>& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("wilcoxon: samples must have equal length");
  }
  std::vector<double> diff;
  diff.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    if (d != 0.0) diff.push_back(d);
  }
  const std::size_t n = diff.size();
  if (n < 5) {
    throw std::runtime_error("wilcoxon: fewer than 5 nonzero differences");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return std::abs(diff[x]) < std::abs(diff[y]);
  });

  // Average ranks over groups of tied absolute differences; the variance
  // correction subtracts sum(t^3 - t) / 48 per tie group.
  std::vector<double> rank(n, 0.0);
  double tie_correction = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && std::abs(diff[order[j + 1]]) == std::abs(diff[order[i]])) ++j;
    double shared = static_cast<double>(i + j + 2) / 2.0;
    for (std::size_t t = i; t <= j; ++t) rank[order[t]] = shared;
    double t_len = static_cast<double>(j - i + 1);
    tie_correction += (t_len * t_len * t_len - t_len) / 48.0;
    i = j + 1;
  }

  double w_pos = 0.0;
  double w_neg = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    (diff[t] > 0.0 ? w_pos : w_neg) += rank[t];
  }

  WilcoxonResult res;
  res.n_nonzero = n;
  res.statistic = std::min(w_pos, w_neg);
  const double dn = static_cast<double>(n);
  const double mean = dn * (dn + 1.0) / 4.0;
  const double var = dn * (dn + 1.0) * (2.0 * dn + 1.0) / 24.0 - tie_correction;
  if (!(var > 0.0)) {
    throw std::runtime_error("wilcoxon: degenerate rank variance");
  }
  res.z = (res.statistic - mean) / std::sqrt(var);
  res.p = std::min(1.0, 2.0 * normal_cdf(res.z));
  return res;
}

std::vector<HolmRow> holm_test(const std::vector<std::pair<std::string, double>>& avg_ranks,
                               const std::string& champion, std::size_t n_datasets,
                               double alpha) {
  if (n_datasets == 0) throw std::invalid_argument("holm: need at least one dataset");
  if (!(alpha > 0.0)) throw std::invalid_argument("holm: alpha must be positive");
  const double* champion_rank = nullptr;
  for (const auto& [name, rank] : avg_ranks) {
    if (name == champion) champion_rank = &rank;
  }
  if (!champion_rank) throw std::invalid_argument("holm: champion not among methods");

  const double k = static_cast<double>(avg_ranks.size());
  const double denom = std::sqrt(k * (k + 1.0) / (6.0 * static_cast<double>(n_datasets)));

  std::vector<HolmRow> rows;
  for (const auto& [name, rank] : avg_ranks) {
    if (name == champion) continue;
    HolmRow row;
    row.method = name;
    row.z = (rank - *champion_rank) / denom;
    row.p = normal_cdf(-row.z);
    rows.push_back(std::move(row));
  }
  std::sort(rows.begin(), rows.end(), [](const HolmRow& x, const HolmRow& y) {
    if (x.z != y.z) return x.z > y.z;
    return x.method < y.method;
  });

  const std::size_t m = rows.size();
  bool chain = true;
  for (std::size_t idx = 0; idx < m; ++idx) {
    rows[idx].adjusted_alpha = alpha / static_cast<double>(m - idx);
    chain = chain && rows[idx].p < rows[idx].adjusted_alpha;
    rows[idx].rejected = chain;
  }
  return rows;
}

}  // namespace iefsvm
