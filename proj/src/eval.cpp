#include "iefsvm/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "iefsvm/util.hpp"

namespace iefsvm {

namespace {

// Seed stream tags; each derived purpose gets its own stream.
constexpr std::uint64_t kTagOuterFolds = 0xa11f01d5;
constexpr std::uint64_t kTagSelectK = 0x5e1ec70b;
constexpr std::uint64_t kTagSelectC = 0x5e1ec70c;
constexpr std::uint64_t kTagFit = 0xf17a0000;
constexpr std::uint64_t kTagInnerFolds = 0x1aaf01d5;
constexpr std::uint64_t kTagUndersample = 0xd0905a3f;

void run_tasks(std::size_t n_tasks, std::size_t threads,
               const std::function<void(std::size_t)>& fn) {
  std::size_t hw = std::thread::hardware_concurrency();
  if (threads == 0) threads = hw > 0 ? hw : 1;
  threads = std::min(threads, n_tasks);
  if (threads <= 1) {
    for (std::size_t t = 0; t < n_tasks; ++t) fn(t);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      std::size_t t = next.fetch_add(1);
      if (t >= n_tasks) return;
      try {
        fn(t);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t w = 0; w < threads; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

double auc(const std::vector<int>& predicted, const std::vector<int>& truth) {
  if (predicted.size() != truth.size() || truth.empty()) {
    throw std::invalid_argument("auc: label vectors must have equal positive length");
  }
  std::size_t tp = 0, fp = 0, pos = 0, neg = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] > 0) {
      ++pos;
      if (predicted[i] > 0) ++tp;
    } else {
      ++neg;
      if (predicted[i] > 0) ++fp;
    }
  }
  if (pos == 0 || neg == 0) {
    throw std::invalid_argument("auc: true labels must contain both classes");
  }
  double tpr = static_cast<double>(tp) / static_cast<double>(pos);
  double fpr = static_cast<double>(fp) / static_cast<double>(neg);
  return (1.0 + tpr - fpr) / 2.0;
}

Method method_from_name(const std::string& name) {
  if (name == "svm") return Method::svm;
  if (name == "usvm") return Method::usvm;
  if (name == "cssvm") return Method::cssvm;
  if (name == "efsvm") return Method::efsvm;
  if (name == "iefsvm") return Method::iefsvm;
  throw std::invalid_argument("unknown method: " + name);
}

std::string method_name(Method m) {
  switch (m) {
    case Method::svm: return "svm";
    case Method::usvm: return "usvm";
    case Method::cssvm: return "cssvm";
    case Method::efsvm: return "efsvm";
    case Method::iefsvm: return "iefsvm";
  }
  throw std::logic_error("unknown method value");
}

KernelSpec resolve_kernel(const ExperimentConfig& cfg, std::size_t n_features) {
  KernelSpec spec;
  spec.kind = cfg.kernel_kind;
  spec.gamma = cfg.gamma > 0.0 ? cfg.gamma
                               : 1.0 / static_cast<double>(std::max<std::size_t>(n_features, 1));
  return spec;
}

TrainedModel fit_method(const Dataset& train, Method method, double c, int k,
                        const SolverConfig& base, const KernelSpec& kernel,
                        std::uint64_t seed, MembershipVector* out_memb,
                        std::vector<char>* out_used) {
  SolverConfig cfg = base;
  cfg.c = c;
  if (out_used) out_used->assign(train.n_samples, 1);

  Dataset training = train;
  MembershipVector memb;
  switch (method) {
    case Method::svm:
      memb = unit_membership(training);
      break;
    case Method::usvm: {
      // Rebuild the kept-row mask by replaying the undersampling draw.
      Dataset reduced = undersample_majority(train, mix_seed(seed, kTagUndersample));
      if (out_used) {
        ImbalanceInfo info = imbalance_info(train);
        std::vector<std::size_t> maj;
        for (std::size_t i = 0; i < train.n_samples; ++i) {
          if (train.labels[i] < 0) maj.push_back(i);
        }
        Rng rng(mix_seed(mix_seed(seed, kTagUndersample), 0xd09e));
        shuffle_vec(maj, rng);
        out_used->assign(train.n_samples, 0);
        for (std::size_t i = 0; i < train.n_samples; ++i) {
          if (train.labels[i] > 0) (*out_used)[i] = 1;
        }
        for (std::size_t t = 0; t < info.n_pos; ++t) (*out_used)[maj[t]] = 1;
      }
      training = std::move(reduced);
      memb = unit_membership(training);
      break;
    }
    case Method::cssvm:
      memb = cost_sensitive_membership(training);
      break;
    case Method::efsvm:
      memb = efsvm_membership(training, k);
      break;
    case Method::iefsvm:
      memb = iefsvm_membership(training);
      break;
  }
  if (out_memb) *out_memb = memb;
  return train_weighted_svm(training, memb, cfg, kernel);
}

double cv_auc(const Dataset& ds, Method method, double c, int k,
              const ExperimentConfig& cfg, const KernelSpec& kernel,
              std::uint64_t seed) {
  auto folds = stratified_folds(ds, cfg.folds, mix_seed(seed, kTagInnerFolds));
  double sum = 0.0;
  for (std::size_t f = 0; f < folds.size(); ++f) {
    Dataset train = subset(ds, folds[f].train);
    TrainedModel model =
        fit_method(train, method, c, k, cfg.solver, kernel, mix_seed(seed, kTagFit, f));
    std::vector<int> pred, truth;
    pred.reserve(folds[f].test.size());
    truth.reserve(folds[f].test.size());
    for (std::size_t idx : folds[f].test) {
      pred.push_back(predict(model, ds.row(idx)));
      truth.push_back(ds.labels[idx]);
    }
    sum += auc(pred, truth);
  }
  return sum / static_cast<double>(folds.size());
}

double reference_c(const std::vector<double>& c_grid) {
  if (c_grid.empty()) throw std::invalid_argument("empty C grid");
  for (double c : c_grid) {
    if (c == 1.0) return 1.0;
  }
  return c_grid[c_grid.size() / 2];
}

double select_c(const Dataset& ds, Method method, int k, const ExperimentConfig& cfg,
                const KernelSpec& kernel, std::uint64_t seed) {
  if (cfg.c_grid.empty()) throw std::invalid_argument("empty C grid");
  double best_c = cfg.c_grid.front();
  double best_auc = -1.0;
  for (double c : cfg.c_grid) {
    double a = cv_auc(ds, method, c, k, cfg, kernel, seed);
    if (a > best_auc) {
      best_auc = a;
      best_c = c;
    }
  }
  return best_c;
}

double run_experiment(const Dataset& ds, Method method, const ExperimentConfig& cfg,
                      std::uint64_t seed) {
  KernelSpec kernel = resolve_kernel(cfg, ds.n_features);
  auto folds = stratified_folds(ds, cfg.folds, mix_seed(seed, kTagOuterFolds));
  double sum = 0.0;
  for (std::size_t f = 0; f < folds.size(); ++f) {
    Dataset train = subset(ds, folds[f].train);
    int k = 0;
    if (method == Method::efsvm) {
      SolverConfig probe = cfg.solver;
      probe.c = reference_c(cfg.c_grid);
      k = efsvm_select_k(train, cfg.k_grid, probe, kernel, mix_seed(seed, kTagSelectK, f));
    }
    double c = select_c(train, method, k, cfg, kernel, mix_seed(seed, kTagSelectC, f));
    TrainedModel model =
        fit_method(train, method, c, k, cfg.solver, kernel, mix_seed(seed, kTagFit, f));
    std::vector<int> pred, truth;
    for (std::size_t idx : folds[f].test) {
      pred.push_back(predict(model, ds.row(idx)));
      truth.push_back(ds.labels[idx]);
    }
    sum += auc(pred, truth);
  }
  return sum / static_cast<double>(folds.size());
}

std::vector<double> rank_descending(const std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] > values[b];
  });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    // Positions i..j (0-based) share the mean of ranks i+1..j+1.
    double shared = static_cast<double>(i + j + 2) / 2.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = shared;
    i = j + 1;
  }
  return ranks;
}

BenchmarkResult run_benchmark(const std::vector<Dataset>& datasets,
                              const std::vector<Method>& methods, std::size_t reps,
                              std::uint64_t seed, const ExperimentConfig& cfg,
                              double ir_threshold, std::size_t threads) {
  if (datasets.empty()) throw std::invalid_argument("run_benchmark: no datasets");
  if (methods.empty()) throw std::invalid_argument("run_benchmark: no methods");
  if (reps == 0) throw std::invalid_argument("run_benchmark: reps must be positive");

  const std::size_t n_d = datasets.size();
  const std::size_t n_m = methods.size();
  std::vector<double> irs(n_d);
  for (std::size_t d = 0; d < n_d; ++d) irs[d] = imbalance_info(datasets[d]).ir;

  // rep r of dataset d uses the same seed for every method.
  std::vector<double> aucs(n_d * n_m * reps, 0.0);
  run_tasks(n_d * n_m * reps, threads, [&](std::size_t task) {
    const std::size_t d = task / (n_m * reps);
    const std::size_t m = (task / reps) % n_m;
    const std::size_t r = task % reps;
    const std::uint64_t rep_seed = mix_seed(seed, d, r);
    aucs[task] = 100.0 * run_experiment(datasets[d], methods[m], cfg, rep_seed);
  });

  BenchmarkResult result;
  result.rank_table.ir_threshold = ir_threshold;
  for (Method m : methods) result.rank_table.method_names.push_back(method_name(m));
  for (std::size_t d = 0; d < n_d; ++d) {
    result.rank_table.dataset_names.push_back(datasets[d].name);
    result.rank_table.dataset_ir.push_back(irs[d]);
    std::vector<double> means(n_m);
    for (std::size_t m = 0; m < n_m; ++m) {
      EvalReport report;
      report.dataset = datasets[d].name;
      report.ir = irs[d];
      report.method = method_name(methods[m]);
      report.seed = seed;
      const double* base = &aucs[(d * n_m + m) * reps];
      report.rep_auc.assign(base, base + reps);
      double mean = std::accumulate(report.rep_auc.begin(), report.rep_auc.end(), 0.0) /
                    static_cast<double>(reps);
      double ssq = 0.0;
      for (double a : report.rep_auc) ssq += (a - mean) * (a - mean);
      report.mean_auc = mean;
      report.std_auc = reps > 1 ? std::sqrt(ssq / static_cast<double>(reps - 1)) : 0.0;
      means[m] = mean;
      result.reports.push_back(std::move(report));
    }
    result.rank_table.ranks.push_back(rank_descending(means));
  }

  auto average_rows = [&](auto include) {
    std::vector<double> avg(n_m, 0.0);
    std::size_t count = 0;
    for (std::size_t d = 0; d < n_d; ++d) {
      if (!include(irs[d])) continue;
      ++count;
      for (std::size_t m = 0; m < n_m; ++m) avg[m] += result.rank_table.ranks[d][m];
    }
    if (count > 0) {
      for (double& v : avg) v /= static_cast<double>(count);
    }
    return std::make_pair(avg, count);
  };
  auto [all, n_all] = average_rows([](double) { return true; });
  auto [above, n_above] = average_rows([&](double ir) { return ir > ir_threshold; });
  auto [below, n_below] = average_rows([&](double ir) { return ir <= ir_threshold; });
  (void)n_all;
  result.rank_table.avg_all = std::move(all);
  result.rank_table.avg_above = std::move(above);
  result.rank_table.avg_below = std::move(below);
  result.rank_table.n_above = n_above;
  result.rank_table.n_below = n_below;
  return result;
}

}  // namespace iefsvm
