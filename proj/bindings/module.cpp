#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <stdexcept>

#include "iefsvm/dataset.hpp"
#include "iefsvm/entropy.hpp"
#include "iefsvm/eval.hpp"
#include "iefsvm/membership.hpp"
#include "iefsvm/stats.hpp"
#include "iefsvm/svm.hpp"

namespace py = pybind11;
using namespace iefsvm;

namespace {

Dataset make_dataset(const std::vector<std::vector<double>>& rows,
                     const std::vector<int>& labels) {
  if (rows.empty()) throw std::invalid_argument("no rows");
  std::size_t dim = rows[0].size();
  std::vector<double> flat;
  flat.reserve(rows.size() * dim);
  for (const auto& row : rows) {
    if (row.size() != dim) throw std::invalid_argument("ragged rows");
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return Dataset("python", std::move(flat), labels, dim);
}

KernelSpec make_kernel(const std::string& kind, double gamma, std::size_t dim) {
  KernelSpec spec;
  if (kind == "linear") {
    spec.kind = KernelKind::linear;
  } else if (kind == "rbf") {
    spec.kind = KernelKind::rbf;
  } else {
    throw std::invalid_argument("kernel must be 'rbf' or 'linear'");
  }
  spec.gamma = gamma > 0.0 ? gamma : 1.0 / static_cast<double>(dim);
  return spec;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "entropy-weighted support vector machines for imbalanced data";

  m.def("binary_entropy", &binary_entropy, py::arg("positives"), py::arg("k"),
        "entropy of the positive fraction among the k nearest neighbors");

  m.def("enumerate_patterns", [] {
    auto patterns = enumerate_patterns();
    std::vector<py::dict> out;
    out.reserve(patterns.size());
    for (const auto& pat : patterns) {
      py::dict d;
      d["pos_counts"] = pat.pos_counts;
      d["mu"] = pat.stats.mu;
      d["sigma"] = pat.stats.sigma;
      d["d"] = pat.stats.d;
      d["theta"] = pat.stats.theta;
      d["nonzero_entropies"] = pat.nonzero_entropies;
      out.push_back(std::move(d));
    }
    return out;
  }, "every realizable profile of positive neighbor counts with its statistics");

  m.def("memberships",
        [](const std::vector<std::vector<double>>& rows, const std::vector<int>& labels,
           const std::string& method, int k) {
          Dataset ds = make_dataset(rows, labels);
          switch (method_from_name(method)) {
            case Method::svm: return unit_membership(ds).values;
            case Method::usvm: return unit_membership(ds).values;
            case Method::cssvm: return cost_sensitive_membership(ds).values;
            case Method::efsvm: return efsvm_membership(ds, k).values;
            case Method::iefsvm: return iefsvm_membership(ds).values;
          }
          throw std::invalid_argument("unknown method");
        },
        py::arg("rows"), py::arg("labels"), py::arg("method") = "iefsvm",
        py::arg("k") = 7, "per-sample membership values for a method");

  py::class_<TrainedModel>(m, "Model")
      .def_property_readonly("bias", [](const TrainedModel& mod) { return mod.bias; })
      .def_property_readonly("n_support",
                             [](const TrainedModel& mod) { return mod.alphas.size(); })
      .def("decision_value",
           [](const TrainedModel& mod, const std::vector<double>& row) {
             return decision_value(mod, row);
           },
           py::arg("row"))
      .def("predict",
           [](const TrainedModel& mod, const std::vector<std::vector<double>>& rows) {
             std::vector<int> out;
             out.reserve(rows.size());
             for (const auto& row : rows) {
               out.push_back(decision_value(mod, row) >= 0.0 ? 1 : -1);
             }
             return out;
           },
           py::arg("rows"))
      .def("to_json", [](const TrainedModel& mod) { return model_to_json_string(mod); })
      .def_static("from_json",
                  [](const std::string& text) { return model_from_json_string(text); },
                  py::arg("text"));

  m.def("train",
        [](const std::vector<std::vector<double>>& rows, const std::vector<int>& labels,
           const std::string& method, double c, int k, const std::string& kernel,
           double gamma, std::uint64_t seed) {
          Dataset ds = make_dataset(rows, labels);
          KernelSpec spec = make_kernel(kernel, gamma, ds.n_features);
          return fit_method(ds, method_from_name(method), c, k, SolverConfig{}, spec, seed);
        },
        py::arg("rows"), py::arg("labels"), py::arg("method") = "iefsvm",
        py::arg("c") = 1.0, py::arg("k") = 7, py::arg("kernel") = "rbf",
        py::arg("gamma") = 0.0, py::arg("seed") = 42,
        "fit one method at a fixed penalty; gamma 0 selects 1/n_features");

  m.def("auc", &auc, py::arg("predicted"), py::arg("truth"),
        "area under the curve from hard labels");

  m.def("wilcoxon_signed_rank",
        [](const std::vector<double>& a, const std::vector<double>& b) {
          WilcoxonResult res = wilcoxon_signed_rank(a, b);
          py::dict d;
          d["statistic"] = res.statistic;
          d["z"] = res.z;
          d["p"] = res.p;
          d["n_nonzero"] = res.n_nonzero;
          return d;
        },
        py::arg("a"), py::arg("b"));

  m.def("holm_test",
        [](const std::vector<std::pair<std::string, double>>& avg_ranks,
           const std::string& champion, std::size_t n_datasets, double alpha) {
          auto rows = holm_test(avg_ranks, champion, n_datasets, alpha);
          std::vector<py::dict> out;
          for (const auto& row : rows) {
            py::dict d;
            d["method"] = row.method;
            d["z"] = row.z;
            d["p"] = row.p;
            d["adjusted_alpha"] = row.adjusted_alpha;
            d["rejected"] = row.rejected;
            out.push_back(std::move(d));
          }
          return out;
        },
        py::arg("avg_ranks"), py::arg("champion"), py::arg("n_datasets"),
        py::arg("alpha") = 0.05);
}
