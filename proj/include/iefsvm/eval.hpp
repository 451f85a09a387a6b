#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "iefsvm/dataset.hpp"
#include "iefsvm/membership.hpp"
#include "iefsvm/svm.hpp"

namespace iefsvm {

/// AUC from hard labels: (1 + true-positive rate - false-positive rate) / 2,
/// in [0, 1].  Requires both classes among the true labels.
double auc(const std::vector<int>& predicted, const std::vector<int>& truth);

enum class Method { svm, usvm, cssvm, efsvm, iefsvm };

Method method_from_name(const std::string& name);
std::string method_name(Method m);

/// Protocol settings shared by experiments and benchmarks.
struct ExperimentConfig {
  std::vector<double> c_grid{0.015625, 0.0625, 0.25, 1.0, 4.0, 16.0, 64.0};
  std::vector<int> k_grid{1, 3, 5, 7, 9, 11, 13, 15};
  KernelKind kernel_kind = KernelKind::rbf;
  double gamma = 0.0;  ///< 0 selects 1 / n_features
  std::size_t folds = 5;
  SolverConfig solver;  ///< solver.c is overridden by the tuned value
};

KernelSpec resolve_kernel(const ExperimentConfig& cfg, std::size_t n_features);

/// Trains one method on a training set at fixed hyperparameters.  k is only
/// read by the entropy-weighted method; the undersampling method draws its
/// majority subset from seed.  When out_memb / out_used are given they
/// receive the membership actually optimized and a mask over the rows of
/// train that entered the optimization.
TrainedModel fit_method(const Dataset& train, Method method, double c, int k,
                        const SolverConfig& base, const KernelSpec& kernel,
                        std::uint64_t seed, MembershipVector* out_memb = nullptr,
                        std::vector<char>* out_used = nullptr);

/// Mean cross-validated AUC of one method at fixed hyperparameters.
double cv_auc(const Dataset& ds, Method method, double c, int k,
              const ExperimentConfig& cfg, const KernelSpec& kernel,
              std::uint64_t seed);

/// Picks C from the grid by cross-validated AUC; ties keep the earliest grid
/// entry.  k must already be fixed for the entropy-weighted method.
double select_c(const Dataset& ds, Method method, int k, const ExperimentConfig& cfg,
                const KernelSpec& kernel, std::uint64_t seed);

/// C used while the neighborhood size is being selected: 1 when the grid
/// contains it, otherwise the middle grid entry.
double reference_c(const std::vector<double>& c_grid);

/// One experiment: stratified k-fold cross-validation with hyperparameters
/// tuned by nested cross-validation on each training split.  Returns the mean
/// test-fold AUC in [0, 1].
double run_experiment(const Dataset& ds, Method method, const ExperimentConfig& cfg,
                      std::uint64_t seed);

struct EvalReport {
  std::string dataset;
  double ir = 1.0;
  std::string method;
  std::vector<double> rep_auc;  ///< percent, one entry per repetition
  double mean_auc = 0.0;        ///< percent
  double std_auc = 0.0;         ///< sample standard deviation, percent
  std::uint64_t seed = 0;
};

struct RankTable {
  std::vector<std::string> method_names;
  std::vector<std::string> dataset_names;
  std::vector<double> dataset_ir;
  std::vector<std::vector<double>> ranks;  ///< [dataset][method], 1 = best
  double ir_threshold = 3.3;
  std::vector<double> avg_all;
  std::vector<double> avg_above;  ///< datasets with ir > threshold
  std::vector<double> avg_below;  ///< datasets with ir <= threshold
  std::size_t n_above = 0;
  std::size_t n_below = 0;
};

struct BenchmarkResult {
  std::vector<EvalReport> reports;  ///< dataset-major, then method order
  RankTable rank_table;
};

/// Ranks descending by value; tied values share the mean of their ranks.
std::vector<double> rank_descending(const std::vector<double>& values);

/// reps experiments per (dataset, method); repetition r of a dataset reuses
/// the same derived seed for every method so the comparison is paired.
BenchmarkResult run_benchmark(const std::vector<Dataset>& datasets,
                              const std::vector<Method>& methods, std::size_t reps,
                              std::uint64_t seed, const ExperimentConfig& cfg,
                              double ir_threshold, std::size_t threads = 0);

}  // namespace iefsvm
