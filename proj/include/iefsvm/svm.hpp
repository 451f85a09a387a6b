#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "iefsvm/dataset.hpp"

namespace iefsvm {

enum class KernelKind { linear, rbf };

struct KernelSpec {
  KernelKind kind = KernelKind::rbf;
  double gamma = 1.0;  ///< rbf width; ignored by the linear kernel
};

double kernel_eval(const KernelSpec& spec, std::span<const double> x,
                   std::span<const double> z);

struct SolverConfig {
  double c = 1.0;            ///< soft-margin penalty, > 0
  double tol = 1e-3;         ///< KKT tolerance
  long max_passes = 100000;  ///< optimization step budget
  double eps = 1e-8;         ///< minimum alpha change treated as progress
  std::size_t cache_rows = 0;     ///< kernel rows kept cached; 0 = automatic
  bool record_objective = false;  ///< keep the per-step dual objective trace
};

/// Per-sample weights in [0, 1] scaling the box constraint of each sample.
struct MembershipVector {
  std::vector<double> values;
};

struct TrainedModel {
  std::vector<std::size_t> support_indices;  ///< into the training set
  std::vector<double> alphas;                ///< 0 < alpha <= s_i * C
  std::vector<int> support_labels;
  std::vector<std::vector<double>> support_vectors;
  double bias = 0.0;
  KernelSpec kernel;
};

struct TrainDiagnostics {
  long iterations = 0;
  double final_violation = 0.0;
  double final_objective = 0.0;
  std::vector<double> objective_trace;  ///< filled when record_objective is set
};

/// Sequential minimal optimization over the weighted soft-margin dual: each
/// alpha_i is boxed by s_i * C, so samples with zero membership stay inert.
/// Pairs are picked by the maximal-violating-pair rule and the run stops once
/// the worst KKT violation falls within tol.
TrainedModel train_weighted_svm(const Dataset& ds, const MembershipVector& memb,
                                const SolverConfig& cfg, const KernelSpec& kernel,
                                TrainDiagnostics* diag = nullptr);

double decision_value(const TrainedModel& model, std::span<const double> x);

/// Hard label; a decision value of exactly zero maps to +1.
int predict(const TrainedModel& model, std::span<const double> x);

std::string model_to_json_string(const TrainedModel& model);
TrainedModel model_from_json_string(const std::string& text);

}  // namespace iefsvm
