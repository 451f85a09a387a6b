#include "iefsvm/membership.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "iefsvm/entropy.hpp"
#include "iefsvm/neighbors.hpp"
#include "iefsvm/util.hpp"

namespace iefsvm {

MembershipVector unit_membership(const Dataset& ds) {
  return {std::vector<double>(ds.n_samples, 1.0)};
}

MembershipVector cost_sensitive_membership(const Dataset& ds) {
  ImbalanceInfo info = imbalance_info(ds);
  MembershipVector memb{std::vector<double>(ds.n_samples, 1.0)};
  for (std::size_t i = 0; i < ds.n_samples; ++i) {
    if (ds.labels[i] < 0) memb.values[i] = 1.0 / info.ir;
  }
  return memb;
}

MembershipVector efsvm_membership(const Dataset& ds, int k) {
  if (k < 1 || k > 15 || k % 2 == 0) {
    throw std::invalid_argument("efsvm_membership: k must be odd and within [1, 15]");
  }
  if (ds.n_samples < static_cast<std::size_t>(k) + 1) {
    throw std::runtime_error("efsvm_membership: need at least k + 1 samples");
  }
  ImbalanceInfo info = imbalance_info(ds);
  MembershipVector memb{std::vector<double>(ds.n_samples, 1.0)};
  for (std::size_t i = 0; i < ds.n_samples; ++i) {
    if (ds.labels[i] > 0) continue;
    double h = binary_entropy(positive_neighbor_count(ds, i, k), k);
    memb.values[i] = (1.0 - h) / info.ir;
  }
  return memb;
}

int efsvm_select_k(const Dataset& ds, const std::vector<int>& k_grid,
                   const SolverConfig& cfg, const KernelSpec& kernel,
                   std::uint64_t seed) {
  if (k_grid.empty()) throw std::invalid_argument("efsvm_select_k: empty grid");
  // The same folds score every candidate so the comparison is paired.
  auto folds = stratified_folds(ds, 5, mix_seed(seed, 0xef5e1ec7));

  double best_err = std::numeric_limits<double>::infinity();
  int best_k = 0;
  for (int k : k_grid) {
    double err_sum = 0.0;
    for (const auto& split : folds) {
      Dataset train = subset(ds, split.train);
      TrainedModel model = train_weighted_svm(train, efsvm_membership(train, k), cfg, kernel);
      std::size_t wrong = 0;
      for (std::size_t idx : split.test) {
        if (predict(model, ds.row(idx)) != ds.labels[idx]) ++wrong;
      }
      err_sum += static_cast<double>(wrong) / static_cast<double>(split.test.size());
    }
    double err = err_sum / static_cast<double>(folds.size());
    if (err < best_err || (err == best_err && k < best_k)) {
      best_err = err;
      best_k = k;
    }
  }
  return best_k;
}

MembershipVector iefsvm_membership(const Dataset& ds) {
  ImbalanceInfo info = imbalance_info(ds);
  std::vector<double> g(ds.n_samples);
  for (std::size_t i = 0; i < ds.n_samples; ++i) {
    PatternStats st = pattern_stats(knn_class_counts(ds, i));
    g[i] = st.d * st.theta;
  }
  const auto [lo_it, hi_it] = std::minmax_element(g.begin(), g.end());
  const double lo = *lo_it;
  const double hi = *hi_it;

  MembershipVector memb{std::vector<double>(ds.n_samples, 1.0)};
  for (std::size_t i = 0; i < ds.n_samples; ++i) {
    if (ds.labels[i] > 0) continue;
    double normalized = hi > lo ? (g[i] - lo) / (hi - lo) : 0.0;
    memb.values[i] = (1.0 - normalized) / info.ir;
  }
  return memb;
}

}  // namespace iefsvm
