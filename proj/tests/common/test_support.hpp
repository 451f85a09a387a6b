#pragma once

// Reference oracles and data generators shared by the test binaries.  The
// oracles deliberately use different algorithms than the library (full sorts,
// projected gradient, brute-force enumeration) so a disagreement points at a
// real defect rather than a shared mistake.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "iefsvm/dataset.hpp"
#include "iefsvm/svm.hpp"
#include "iefsvm/util.hpp"

namespace testutil {

// ---------------------------------------------------------------------------
// data generators

// Box-Muller standard normal; avoids std::normal_distribution so draws are
// identical across standard libraries.
inline double gauss(iefsvm::Rng& rng) {
  double u1;
  do {
    u1 = iefsvm::draw_unit(rng);
  } while (u1 <= 0.0);
  double u2 = iefsvm::draw_unit(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

/// Two spherical Gaussian classes: the majority is centered at the origin and
/// the minority is shifted by mean_gap in every dimension.
inline iefsvm::Dataset gaussian_blobs(std::uint64_t seed, std::size_t n_pos,
                                      std::size_t n_neg, std::size_t dim,
                                      double mean_gap, double stddev,
                                      std::string name = "blobs") {
  iefsvm::Rng rng(seed);
  std::vector<double> features;
  features.reserve((n_pos + n_neg) * dim);
  std::vector<int> labels;
  labels.reserve(n_pos + n_neg);
  for (std::size_t i = 0; i < n_pos; ++i) {
    for (std::size_t j = 0; j < dim; ++j) features.push_back(mean_gap + stddev * gauss(rng));
    labels.push_back(1);
  }
  for (std::size_t i = 0; i < n_neg; ++i) {
    for (std::size_t j = 0; j < dim; ++j) features.push_back(stddev * gauss(rng));
    labels.push_back(-1);
  }
  return iefsvm::Dataset(std::move(name), std::move(features), std::move(labels), dim);
}

/// Small dataset with uniform features in [-1, 1] and at least one sample per
/// class; meant for solver stress cases.
inline iefsvm::Dataset uniform_dataset(iefsvm::Rng& rng, std::size_t n, std::size_t dim) {
  std::vector<double> features(n * dim);
  for (double& v : features) v = 2.0 * iefsvm::draw_unit(rng) - 1.0;
  std::vector<int> labels(n);
  for (;;) {
    bool pos = false, neg = false;
    for (int& y : labels) {
      y = iefsvm::draw_unit(rng) < 0.5 ? 1 : -1;
      (y > 0 ? pos : neg) = true;
    }
    if (pos && neg) break;
  }
  return iefsvm::Dataset("uniform", std::move(features), std::move(labels), dim);
}

inline std::vector<double> random_memberships(iefsvm::Rng& rng, std::size_t n,
                                              double lo = 0.05, double hi = 1.0) {
  std::vector<double> s(n);
  for (double& v : s) v = lo + (hi - lo) * iefsvm::draw_unit(rng);
  return s;
}

// ---------------------------------------------------------------------------
// nearest-neighbor oracle: full sort by (squared distance, index)

inline int knn_pos_oracle(const iefsvm::Dataset& ds, std::size_t i, int k) {
  std::vector<std::pair<double, std::size_t>> order;
  for (std::size_t j = 0; j < ds.n_samples; ++j) {
    if (j == i) continue;
    double acc = 0.0;
    for (std::size_t f = 0; f < ds.n_features; ++f) {
      double diff = ds.features[i * ds.n_features + f] - ds.features[j * ds.n_features + f];
      acc += diff * diff;
    }
    order.emplace_back(acc, j);
  }
  std::sort(order.begin(), order.end());
  int pos = 0;
  for (int t = 0; t < k; ++t) {
    if (ds.labels[order[static_cast<std::size_t>(t)].second] > 0) ++pos;
  }
  return pos;
}

// ---------------------------------------------------------------------------
// ranking oracle: rank_i = 1 + #{greater} + #{equal others}/2

inline std::vector<double> rank_oracle(const std::vector<double>& values) {
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    double greater = 0.0, equal = 0.0;
    for (std::size_t j = 0; j < values.size(); ++j) {
      if (j == i) continue;
      if (values[j] > values[i]) greater += 1.0;
      if (values[j] == values[i]) equal += 1.0;
    }
    ranks[i] = 1.0 + greater + equal / 2.0;
  }
  return ranks;
}

// ---------------------------------------------------------------------------
// quadratic program oracle: projected gradient with exact line search on
//   minimize 1/2 a'Qa - sum(a)  s.t.  0 <= a_i <= cap_i,  y'a = 0

/// Projection of v onto the box intersected with the label hyperplane, via
/// bisection on the equality multiplier.
inline std::vector<double> project_qp(const std::vector<double>& v,
                                      const std::vector<int>& y,
                                      const std::vector<double>& cap) {
  const std::size_t n = v.size();
  auto balance = [&](double lambda) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double a = std::clamp(v[i] - lambda * y[i], 0.0, cap[i]);
      acc += y[i] * a;
    }
    return acc;
  };
  double span = 1.0;
  for (std::size_t i = 0; i < n; ++i) span = std::max(span, std::abs(v[i]) + cap[i]);
  double lo = -2.0 * span, hi = 2.0 * span;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (balance(mid) > 0.0) {
      lo = mid;  // the sum shrinks as lambda grows
    } else {
      hi = mid;
    }
  }
  double lambda = 0.5 * (lo + hi);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = std::clamp(v[i] - lambda * y[i], 0.0, cap[i]);
  return out;
}

struct QpSolution {
  std::vector<double> alpha;
  double objective = 0.0;  ///< the maximized dual sum(a) - 1/2 a'Qa
};

/// Q is the label-weighted Gram matrix y_i y_j K_ij, row-major.
inline QpSolution solve_qp_reference(const std::vector<double>& q,
                                     const std::vector<int>& y,
                                     const std::vector<double>& cap,
                                     long max_iters = 200000) {
  const std::size_t n = y.size();
  double lipschitz = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row += std::abs(q[i * n + j]);
    lipschitz = std::max(lipschitz, row);
  }
  const double step = 1.0 / std::max(lipschitz, 1e-12);

  std::vector<double> alpha(n, 0.0);
  std::vector<double> grad(n), v(n), dir(n);
  long stall = 0;
  for (long it = 0; it < max_iters && stall < 64; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      double acc = -1.0;
      for (std::size_t j = 0; j < n; ++j) acc += q[i * n + j] * alpha[j];
      grad[i] = acc;
    }
    for (std::size_t i = 0; i < n; ++i) v[i] = alpha[i] - step * grad[i];
    std::vector<double> target = project_qp(v, y, cap);
    double gd = 0.0, dqd = 0.0, dmax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      dir[i] = target[i] - alpha[i];
      gd += grad[i] * dir[i];
      dmax = std::max(dmax, std::abs(dir[i]));
      double qd = 0.0;
      for (std::size_t j = 0; j < n; ++j) qd += q[i * n + j] * dir[j];
      dqd += dir[i] * qd;
    }
    double tau = dqd > 0.0 ? std::clamp(-gd / dqd, 0.0, 1.0) : 1.0;
    for (std::size_t i = 0; i < n; ++i) alpha[i] += tau * dir[i];
    stall = dmax * tau < 1e-14 ? stall + 1 : 0;
  }

  QpSolution sol;
  sol.alpha = alpha;
  double quad = 0.0, lin = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    lin += alpha[i];
    for (std::size_t j = 0; j < n; ++j) quad += alpha[i] * q[i * n + j] * alpha[j];
  }
  sol.objective = lin - 0.5 * quad;
  return sol;
}

inline std::vector<double> labeled_gram(const iefsvm::Dataset& ds,
                                        const iefsvm::KernelSpec& kernel) {
  const std::size_t n = ds.n_samples;
  std::vector<double> q(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      q[i * n + j] = ds.labels[i] * ds.labels[j] * kernel_eval(kernel, ds.row(i), ds.row(j));
    }
  }
  return q;
}

// ---------------------------------------------------------------------------
// solver post-conditions

inline std::vector<double> full_alpha(const iefsvm::TrainedModel& model, std::size_t n) {
  std::vector<double> alpha(n, 0.0);
  for (std::size_t s = 0; s < model.alphas.size(); ++s) {
    alpha[model.support_indices[s]] = model.alphas[s];
  }
  return alpha;
}

inline double dual_objective(const std::vector<double>& q, const std::vector<double>& alpha) {
  const std::size_t n = alpha.size();
  double quad = 0.0, lin = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    lin += alpha[i];
    for (std::size_t j = 0; j < n; ++j) quad += alpha[i] * q[i * n + j] * alpha[j];
  }
  return lin - 0.5 * quad;
}

/// Worst violation of the optimality conditions: bound samples must respect
/// their margin inequality and free samples must sit on the margin.
inline double worst_kkt_violation(const iefsvm::Dataset& ds,
                                  const iefsvm::KernelSpec& kernel,
                                  const std::vector<double>& alpha, double bias,
                                  const std::vector<double>& cap) {
  double worst = 0.0;
  for (std::size_t i = 0; i < ds.n_samples; ++i) {
    if (cap[i] == 0.0) continue;
    double u = bias;
    for (std::size_t j = 0; j < ds.n_samples; ++j) {
      if (alpha[j] == 0.0) continue;
      u += alpha[j] * ds.labels[j] * kernel_eval(kernel, ds.row(j), ds.row(i));
    }
    const double margin = ds.labels[i] * u;
    double viol = 0.0;
    if (alpha[i] == 0.0) {
      viol = std::max(0.0, 1.0 - margin);
    } else if (alpha[i] >= cap[i]) {
      viol = std::max(0.0, margin - 1.0);
    } else {
      viol = std::abs(margin - 1.0);
    }
    worst = std::max(worst, viol);
  }
  return worst;
}

// ---------------------------------------------------------------------------
// exact signed-rank oracle: two-sided mid-p from the full 2^n sign
// distribution of the rank sum, ties handled through average ranks. Each tail
// counts strict exceedance plus half the probability mass sitting exactly on
// the observed sum; that is the convention a continuity-uncorrected normal
// approximation estimates, so the two stay comparable at small n.

inline double wilcoxon_exact_p(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> mag;
  std::vector<bool> positive;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    if (d == 0.0) continue;
    mag.push_back(std::abs(d));
    positive.push_back(d > 0.0);
  }
  const std::size_t n = mag.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return mag[x] < mag[y]; });
  std::vector<double> rank(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && mag[order[j + 1]] == mag[order[i]]) ++j;
    double shared = static_cast<double>(i + j + 2) / 2.0;
    for (std::size_t t = i; t <= j; ++t) rank[order[t]] = shared;
    i = j + 1;
  }
  double w_plus = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    if (positive[t]) w_plus += rank[t];
  }

  const std::uint64_t total = 1ULL << n;
  std::uint64_t count_lt = 0, count_gt = 0, count_eq = 0;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    double w = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      if (mask & (1ULL << t)) w += rank[t];
    }
    if (w < w_plus - 1e-9)
      ++count_lt;
    else if (w > w_plus + 1e-9)
      ++count_gt;
    else
      ++count_eq;
  }
  double half_eq = 0.5 * static_cast<double>(count_eq);
  double tail = (static_cast<double>(std::min(count_lt, count_gt)) + half_eq) /
                static_cast<double>(total);
  return std::min(1.0, 2.0 * tail);
}

// ---------------------------------------------------------------------------
// scratch directories

struct TempDir {
  std::filesystem::path path;

  explicit TempDir(const std::string& label) {
    static std::uint64_t counter = 0;
    path = std::filesystem::temp_directory_path() /
           ("iefsvm_" + label + "_" + std::to_string(++counter));
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name) const { return (path / name).string(); }
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  return content;
}

}  // namespace testutil
