#include "iefsvm/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <list>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

#include "iefsvm/util.hpp"

namespace iefsvm {

namespace {

constexpr double kEtaFloor = 1e-12;

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) acc += a[j] * b[j];
  return acc;
}

double sqdist(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    double diff = a[j] - b[j];
    acc += diff * diff;
  }
  return acc;
}

// Row-wise kernel cache with least-recently-used eviction.  Rows are always
// recomputed from scratch on a miss, so the solver's arithmetic is identical
// for every capacity.
class KernelCache {
 public:
  KernelCache(const Dataset& ds, const KernelSpec& spec, std::size_t capacity)
      : ds_(ds), spec_(spec), capacity_(std::max<std::size_t>(capacity, 2)) {
    diag_.resize(ds.n_samples);
    for (std::size_t i = 0; i < ds.n_samples; ++i) {
      diag_[i] = kernel_eval(spec_, ds_.row(i), ds_.row(i));
    }
  }

  double diag(std::size_t i) const { return diag_[i]; }

  const std::vector<double>& row(std::size_t i) {
    auto it = entries_.find(i);
    if (it != entries_.end()) {
      lru_.splice(lru_.begin(), lru_, it->second.pos);
      return it->second.values;
    }
    if (entries_.size() >= capacity_) {
      std::size_t victim = lru_.back();
      lru_.pop_back();
      entries_.erase(victim);
    }
    lru_.push_front(i);
    Entry entry;
    entry.pos = lru_.begin();
    entry.values.resize(ds_.n_samples);
    for (std::size_t j = 0; j < ds_.n_samples; ++j) {
      entry.values[j] = kernel_eval(spec_, ds_.row(i), ds_.row(j));
    }
    return entries_.emplace(i, std::move(entry)).first->second.values;
  }

 private:
  struct Entry {
    std::vector<double> values;
    std::list<std::size_t>::iterator pos;
  };

  const Dataset& ds_;
  KernelSpec spec_;
  std::size_t capacity_;
  std::vector<double> diag_;
  std::list<std::size_t> lru_;
  std::unordered_map<std::size_t, Entry> entries_;
};

void validate_inputs(const Dataset& ds, const MembershipVector& memb,
                     const SolverConfig& cfg, const KernelSpec& kernel) {
  if (memb.values.size() != ds.n_samples) {
    throw std::invalid_argument("membership vector length does not match dataset");
  }
  if (!(cfg.c > 0.0) || !(cfg.tol > 0.0) || !(cfg.eps > 0.0) || cfg.max_passes <= 0) {
    throw std::invalid_argument("solver configuration values must be positive");
  }
  if (kernel.kind == KernelKind::rbf && !(kernel.gamma > 0.0)) {
    throw std::invalid_argument("rbf kernel needs gamma > 0");
  }
  bool pos_active = false;
  bool neg_active = false;
  for (std::size_t i = 0; i < ds.n_samples; ++i) {
    double s = memb.values[i];
    if (!(s >= 0.0) || !std::isfinite(s)) {
      throw std::invalid_argument("memberships must be finite and non-negative");
    }
    if (s > 0.0) (ds.labels[i] > 0 ? pos_active : neg_active) = true;
  }
  if (!pos_active || !neg_active) {
    throw std::runtime_error("training needs both classes among samples with s > 0");
  }
}

}  // namespace

double kernel_eval(const KernelSpec& spec, std::span<const double> x,
                   std::span<const double> z) {
  if (x.size() != z.size()) throw std::invalid_argument("kernel: dimension mismatch");
  switch (spec.kind) {
    case KernelKind::linear:
      return dot(x, z);
    case KernelKind::rbf:
      return std::exp(-spec.gamma * sqdist(x, z));
  }
  throw std::logic_error("unknown kernel kind");
}

TrainedModel train_weighted_svm(const Dataset& ds, const MembershipVector& memb,
                                const SolverConfig& cfg, const KernelSpec& kernel,
                                TrainDiagnostics* diag) {
  validate_inputs(ds, memb, cfg, kernel);
  const std::size_t n = ds.n_samples;
  const auto& y = ds.labels;

  std::vector<double> cap(n);
  for (std::size_t i = 0; i < n; ++i) cap[i] = memb.values[i] * cfg.c;

  std::vector<double> alpha(n, 0.0);
  // Gradient of the dual objective being minimized; with alpha = 0 every
  // component starts at -1.
  std::vector<double> grad(n, -1.0);

  std::size_t cache_rows = cfg.cache_rows > 0 ? cfg.cache_rows : std::min<std::size_t>(n, 1024);
  KernelCache cache(ds, kernel, cache_rows);

  double objective = 0.0;
  long iter = 0;
  double violation = 0.0;
  if (diag) {
    diag->objective_trace.clear();
    if (cfg.record_objective) diag->objective_trace.push_back(objective);
  }

  for (;; ++iter) {
    // Maximal violating pair: i maximizes -y*grad over samples whose alpha
    // can grow in its direction, j minimizes it over those that can shrink.
    double up_best = -std::numeric_limits<double>::infinity();
    double low_best = std::numeric_limits<double>::infinity();
    std::ptrdiff_t i = -1;
    std::ptrdiff_t j = -1;
    for (std::size_t t = 0; t < n; ++t) {
      const double v = -y[t] * grad[t];
      const bool movable_up = y[t] > 0 ? alpha[t] < cap[t] : alpha[t] > 0.0;
      const bool movable_low = y[t] > 0 ? alpha[t] > 0.0 : alpha[t] < cap[t];
      if (movable_up && v > up_best) {
        up_best = v;
        i = static_cast<std::ptrdiff_t>(t);
      }
      if (movable_low && v < low_best) {
        low_best = v;
        j = static_cast<std::ptrdiff_t>(t);
      }
    }
    if (i < 0 || j < 0) {
      violation = 0.0;
      break;
    }
    violation = up_best - low_best;
    if (violation <= cfg.tol) break;
    if (iter >= cfg.max_passes) {
      throw std::runtime_error("SMO did not converge within " +
                               std::to_string(cfg.max_passes) +
                               " steps; KKT violation " + fmt_double(violation));
    }

    const std::size_t ii = static_cast<std::size_t>(i);
    const std::size_t jj = static_cast<std::size_t>(j);
    const std::vector<double>& row_i = cache.row(ii);
    const std::vector<double>& row_j = cache.row(jj);

    double eta = cache.diag(ii) + cache.diag(jj) - 2.0 * row_i[jj];
    if (eta < kEtaFloor) eta = kEtaFloor;

    // Step length along the direction that raises alpha_i (in its label's
    // sense) and lowers alpha_j, clipped by both box constraints.
    const double t_star = violation / eta;
    const double t_max_i = y[ii] > 0 ? cap[ii] - alpha[ii] : alpha[ii];
    const double t_max_j = y[jj] > 0 ? alpha[jj] : cap[jj] - alpha[jj];
    const double t = std::min({t_star, t_max_i, t_max_j});
    const bool pin_i = t == t_max_i;
    const bool pin_j = t == t_max_j;
    if (!pin_i && !pin_j && t < cfg.eps) break;  // stalled below the alpha resolution

    const double old_i = alpha[ii];
    const double old_j = alpha[jj];
    if (pin_i) {
      alpha[ii] = y[ii] > 0 ? cap[ii] : 0.0;
    } else {
      alpha[ii] += y[ii] * t;
    }
    if (pin_j) {
      alpha[jj] = y[jj] > 0 ? 0.0 : cap[jj];
    } else {
      alpha[jj] -= y[jj] * t;
    }
    const double delta_i = alpha[ii] - old_i;
    const double delta_j = alpha[jj] - old_j;

    if (cfg.record_objective) {
      // Change of the maximized dual under the quadratic model, evaluated
      // with the pre-update gradient.
      const double q_ii = cache.diag(ii);
      const double q_jj = cache.diag(jj);
      const double q_ij = y[ii] * y[jj] * row_i[jj];
      const double dmin = grad[ii] * delta_i + grad[jj] * delta_j +
                          0.5 * (q_ii * delta_i * delta_i +
                                 2.0 * q_ij * delta_i * delta_j +
                                 q_jj * delta_j * delta_j);
      objective -= dmin;
      if (diag) diag->objective_trace.push_back(objective);
    }

    for (std::size_t t2 = 0; t2 < n; ++t2) {
      grad[t2] += y[t2] * (y[ii] * row_i[t2] * delta_i + y[jj] * row_j[t2] * delta_j);
    }
  }

  // Bias from the free support vectors, or from the midpoint of the feasible
  // interval defined by the bound samples when none are free.
  double free_sum = 0.0;
  std::size_t free_count = 0;
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < n; ++t) {
    if (cap[t] == 0.0) continue;  // inert sample, no constraint on the bias
    const double target = -y[t] * grad[t];  // equals y_t minus the margin sum
    if (alpha[t] > 0.0 && alpha[t] < cap[t]) {
      free_sum += target;
      ++free_count;
    } else if ((y[t] > 0 && alpha[t] == 0.0) || (y[t] < 0 && alpha[t] >= cap[t])) {
      lo = std::max(lo, target);
    } else {
      hi = std::min(hi, target);
    }
  }
  double bias = 0.0;
  if (free_count > 0) {
    bias = free_sum / static_cast<double>(free_count);
  } else if (std::isfinite(lo) && std::isfinite(hi)) {
    bias = (lo + hi) / 2.0;
  } else if (std::isfinite(lo)) {
    bias = lo;
  } else if (std::isfinite(hi)) {
    bias = hi;
  }

  if (diag) {
    diag->iterations = iter;
    diag->final_violation = violation;
    double w = 0.0;
    for (std::size_t t = 0; t < n; ++t) w += alpha[t] * (1.0 - grad[t]);
    diag->final_objective = 0.5 * w;
  }

  TrainedModel model;
  model.kernel = kernel;
  model.bias = bias;
  for (std::size_t t = 0; t < n; ++t) {
    if (alpha[t] > 0.0) {
      model.support_indices.push_back(t);
      model.alphas.push_back(alpha[t]);
      model.support_labels.push_back(y[t]);
      auto r = ds.row(t);
      model.support_vectors.emplace_back(r.begin(), r.end());
    }
  }
  return model;
}

double decision_value(const TrainedModel& model, std::span<const double> x) {
  double acc = model.bias;
  for (std::size_t s = 0; s < model.alphas.size(); ++s) {
    acc += model.alphas[s] * model.support_labels[s] *
           kernel_eval(model.kernel, model.support_vectors[s], x);
  }
  return acc;
}

int predict(const TrainedModel& model, std::span<const double> x) {
  return decision_value(model, x) >= 0.0 ? 1 : -1;
}

std::string model_to_json_string(const TrainedModel& model) {
  nlohmann::json j;
  j["format"] = "iefsvm-model";
  j["format_version"] = 1;
  j["kernel"]["kind"] = model.kernel.kind == KernelKind::rbf ? "rbf" : "linear";
  j["kernel"]["gamma"] = model.kernel.gamma;
  j["bias"] = model.bias;
  j["support"]["indices"] = model.support_indices;
  j["support"]["alphas"] = model.alphas;
  j["support"]["labels"] = model.support_labels;
  j["support"]["vectors"] = model.support_vectors;
  return j.dump(2);
}

TrainedModel model_from_json_string(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (j.value("format", "") != "iefsvm-model") {
    throw std::runtime_error("not a model document");
  }
  if (j.value("format_version", 0) != 1) {
    throw std::runtime_error("unsupported model format version");
  }
  TrainedModel model;
  std::string kind = j.at("kernel").at("kind").get<std::string>();
  if (kind == "rbf") {
    model.kernel.kind = KernelKind::rbf;
  } else if (kind == "linear") {
    model.kernel.kind = KernelKind::linear;
  } else {
    throw std::runtime_error("unknown kernel kind: " + kind);
  }
  model.kernel.gamma = j.at("kernel").at("gamma").get<double>();
  model.bias = j.at("bias").get<double>();
  model.support_indices = j.at("support").at("indices").get<std::vector<std::size_t>>();
  model.alphas = j.at("support").at("alphas").get<std::vector<double>>();
  model.support_labels = j.at("support").at("labels").get<std::vector<int>>();
  model.support_vectors =
      j.at("support").at("vectors").get<std::vector<std::vector<double>>>();
  const std::size_t m = model.alphas.size();
  if (model.support_indices.size() != m || model.support_labels.size() != m ||
      model.support_vectors.size() != m) {
    throw std::runtime_error("inconsistent support arrays in model document");
  }
  return model;
}

}  // namespace iefsvm
