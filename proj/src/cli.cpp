#include "iefsvm/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "iefsvm/dataset.hpp"
#include "iefsvm/entropy.hpp"
#include "iefsvm/eval.hpp"
#include "iefsvm/membership.hpp"
#include "iefsvm/neighbors.hpp"
#include "iefsvm/stats.hpp"
#include "iefsvm/svm.hpp"
#include "iefsvm/util.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace iefsvm {

namespace {

constexpr std::uint64_t kTagTrainSelectK = 0xc111a001;
constexpr std::uint64_t kTagTrainSelectC = 0xc111a002;
constexpr std::uint64_t kTagTrainFit = 0xc111a003;

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  std::stringstream ss(text);
  while (std::getline(ss, cur, ',')) {
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

std::vector<double> parse_double_list(const std::string& text, const char* what) {
  std::vector<double> out;
  for (const auto& tok : split_list(text)) {
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw std::runtime_error(std::string(what) + ": cannot parse '" + tok + "'");
    }
  }
  if (out.empty()) throw std::runtime_error(std::string(what) + ": empty list");
  return out;
}

std::vector<int> parse_int_list(const std::string& text, const char* what) {
  std::vector<int> out;
  for (const auto& tok : split_list(text)) {
    try {
      out.push_back(std::stoi(tok));
    } catch (const std::exception&) {
      throw std::runtime_error(std::string(what) + ": cannot parse '" + tok + "'");
    }
  }
  if (out.empty()) throw std::runtime_error(std::string(what) + ": empty list");
  return out;
}

void validate_common(const RunConfig& cfg) {
  if (cfg.kernel != "rbf" && cfg.kernel != "linear") {
    throw std::runtime_error("kernel must be 'rbf' or 'linear'");
  }
  if (cfg.gamma < 0.0) throw std::runtime_error("gamma must be non-negative");
  if (cfg.folds < 2) throw std::runtime_error("folds must be at least 2");
  if (cfg.c_grid.empty()) throw std::runtime_error("C grid is empty");
  for (double c : cfg.c_grid) {
    if (!(c > 0.0)) throw std::runtime_error("C grid entries must be positive");
  }
  if (cfg.k_grid.empty()) throw std::runtime_error("k grid is empty");
  for (int k : cfg.k_grid) {
    if (k < 1 || k > 15 || k % 2 == 0) {
      throw std::runtime_error("k grid entries must be odd and within [1, 15]");
    }
  }
}

json config_to_json(const RunConfig& cfg) {
  json j;
  j["data"] = cfg.data_paths;
  j["label_col"] = cfg.label_column;
  j["minority_label"] = cfg.minority_label;
  j["header"] = cfg.has_header;
  j["method"] = cfg.methods;
  j["kernel"] = cfg.kernel;
  j["gamma"] = cfg.gamma;
  j["c_grid"] = cfg.c_grid;
  j["k_grid"] = cfg.k_grid;
  j["folds"] = cfg.folds;
  j["reps"] = cfg.reps;
  j["seed"] = cfg.seed;
  j["ir_threshold"] = cfg.ir_threshold;
  j["normalize"] = cfg.normalize;
  j["dump_memberships"] = cfg.dump_memberships;
  j["model"] = cfg.model_path;
  j["reports"] = cfg.report_paths;
  j["champion"] = cfg.champion;
  return j;
}

json meta_json(const RunConfig& cfg) {
  json meta;
  meta["tool"] = "iefsvm";
  meta["version"] = kToolkitVersion;
  meta["config_hash"] = config_hash(cfg);
  meta["seed"] = cfg.seed;
  meta["config"] = config_to_json(cfg);
  return meta;
}

std::vector<std::string> meta_lines(const RunConfig& cfg) {
  return {
      std::string("tool=iefsvm ") + kToolkitVersion,
      "config_hash=" + config_hash(cfg),
      "seed=" + std::to_string(cfg.seed),
  };
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path.string());
  return out;
}

void write_meta(std::ostream& out, const RunConfig& cfg) {
  for (const auto& line : meta_lines(cfg)) out << "# " << line << "\n";
}

void write_json_file(const fs::path& path, const json& j) {
  auto out = open_out(path);
  out << j.dump(2) << "\n";
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

void note_written(const fs::path& path) { std::cout << "wrote " << path.string() << "\n"; }

ExperimentConfig experiment_config(const RunConfig& cfg) {
  ExperimentConfig e;
  e.c_grid = cfg.c_grid;
  e.k_grid = cfg.k_grid;
  e.kernel_kind = cfg.kernel == "linear" ? KernelKind::linear : KernelKind::rbf;
  e.gamma = cfg.gamma;
  e.folds = cfg.folds;
  return e;
}

struct LoadedDataset {
  Dataset ds;
  ImbalanceInfo info;
  std::optional<MinMaxScaler> scaler;
};

LoadedDataset load_one(const RunConfig& cfg, const std::string& path) {
  if (cfg.label_column.empty()) throw std::runtime_error("--label-col is required");
  if (cfg.minority_label.empty()) throw std::runtime_error("--minority-label is required");
  LoadedDataset out;
  out.ds = load_csv(path, cfg.label_column, cfg.minority_label, {cfg.has_header});
  out.info = imbalance_info(out.ds);
  if (cfg.normalize) {
    out.scaler = fit_minmax(out.ds);
    out.ds = apply_minmax(out.ds, *out.scaler);
  }
  return out;
}

Method single_method(const RunConfig& cfg) {
  if (cfg.methods.size() != 1) {
    throw std::runtime_error("exactly one --method is required for this command");
  }
  return method_from_name(cfg.methods[0]);
}

}  // namespace

std::string config_hash(const RunConfig& cfg) {
  return to_hex(fnv1a64(config_to_json(cfg).dump()));
}

std::string config_to_json_string(const RunConfig& cfg) {
  return config_to_json(cfg).dump(2);
}

RunConfig config_from_json_string(const std::string& text) {
  json j = json::parse(text);
  RunConfig cfg;
  cfg.data_paths = j.at("data").get<std::vector<std::string>>();
  cfg.label_column = j.at("label_col").get<std::string>();
  cfg.minority_label = j.at("minority_label").get<std::string>();
  cfg.has_header = j.at("header").get<bool>();
  cfg.methods = j.at("method").get<std::vector<std::string>>();
  cfg.kernel = j.at("kernel").get<std::string>();
  cfg.gamma = j.at("gamma").get<double>();
  cfg.c_grid = j.at("c_grid").get<std::vector<double>>();
  cfg.k_grid = j.at("k_grid").get<std::vector<int>>();
  cfg.folds = j.at("folds").get<std::size_t>();
  cfg.reps = j.at("reps").get<std::size_t>();
  cfg.seed = j.at("seed").get<std::uint64_t>();
  cfg.ir_threshold = j.at("ir_threshold").get<double>();
  cfg.normalize = j.at("normalize").get<bool>();
  cfg.dump_memberships = j.at("dump_memberships").get<bool>();
  cfg.model_path = j.at("model").get<std::string>();
  cfg.report_paths = j.at("reports").get<std::vector<std::string>>();
  cfg.champion = j.at("champion").get<std::string>();
  return cfg;
}

int cmd_patterns(const RunConfig& cfg) {
  auto patterns = enumerate_patterns();
  fs::path atlas_path = fs::path(cfg.out_dir) / "pattern_atlas.csv";
  if (atlas_path.has_parent_path()) fs::create_directories(atlas_path.parent_path());
  emit_pattern_atlas(patterns, atlas_path.string(), meta_lines(cfg));
  note_written(atlas_path);

  std::map<int, std::size_t> histogram;
  for (const auto& pat : patterns) histogram[pat.nonzero_entropies]++;
  json summary;
  summary["meta"] = meta_json(cfg);
  summary["total_patterns"] = patterns.size();
  json hist = json::object();
  for (const auto& [count, n] : histogram) hist[std::to_string(count)] = n;
  summary["nonzero_entropy_histogram"] = hist;
  fs::path summary_path = fs::path(cfg.out_dir) / "patterns_summary.json";
  write_json_file(summary_path, summary);
  note_written(summary_path);
  return 0;
}

int cmd_train(const RunConfig& cfg) {
  validate_common(cfg);
  if (cfg.data_paths.size() != 1) {
    throw std::runtime_error("train needs exactly one --data path");
  }
  Method method = single_method(cfg);
  LoadedDataset loaded = load_one(cfg, cfg.data_paths[0]);
  const Dataset& ds = loaded.ds;

  ExperimentConfig e = experiment_config(cfg);
  KernelSpec kernel = resolve_kernel(e, ds.n_features);

  int k = 0;
  if (method == Method::efsvm) {
    if (e.k_grid.size() == 1) {
      k = e.k_grid[0];
    } else {
      SolverConfig probe = e.solver;
      probe.c = reference_c(e.c_grid);
      k = efsvm_select_k(ds, e.k_grid, probe, kernel, mix_seed(cfg.seed, kTagTrainSelectK));
    }
  }
  double c = e.c_grid.size() == 1
                 ? e.c_grid[0]
                 : select_c(ds, method, k, e, kernel, mix_seed(cfg.seed, kTagTrainSelectC));

  MembershipVector memb;
  std::vector<char> used;
  TrainedModel model = fit_method(ds, method, c, k, e.solver, kernel,
                                  mix_seed(cfg.seed, kTagTrainFit), &memb, &used);

  json envelope;
  envelope["meta"] = meta_json(cfg);
  envelope["chosen"]["c"] = c;
  envelope["chosen"]["k"] = method == Method::efsvm ? json(k) : json(nullptr);
  if (loaded.scaler) {
    envelope["normalization"]["col_min"] = loaded.scaler->col_min;
    envelope["normalization"]["col_max"] = loaded.scaler->col_max;
  } else {
    envelope["normalization"] = nullptr;
  }
  envelope["model"] = json::parse(model_to_json_string(model));
  fs::path model_path = fs::path(cfg.out_dir) / "model.json";
  write_json_file(model_path, envelope);
  note_written(model_path);

  if (cfg.dump_memberships) {
    const bool with_stats = ds.n_samples >= 16;
    fs::path dump_path = fs::path(cfg.out_dir) / "memberships.csv";
    auto out = open_out(dump_path);
    write_meta(out, cfg);
    out << "index,label,mu,sigma,d,theta,g,s\n";
    for (std::size_t i = 0; i < ds.n_samples; ++i) {
      PatternStats st;
      if (with_stats) st = pattern_stats(knn_class_counts(ds, i));
      double s = method == Method::usvm ? (used[i] ? 1.0 : 0.0) : memb.values[i];
      out << i << ',' << ds.labels[i] << ',' << fmt_double(st.mu) << ','
          << fmt_double(st.sigma) << ',' << fmt_double(st.d) << ','
          << fmt_double(st.theta) << ',' << fmt_double(st.d * st.theta) << ','
          << fmt_double(s) << "\n";
    }
    note_written(dump_path);
  }
  return 0;
}

int cmd_predict(const RunConfig& cfg) {
  if (cfg.model_path.empty()) throw std::runtime_error("--model is required");
  if (cfg.data_paths.size() != 1) {
    throw std::runtime_error("predict needs exactly one --data path");
  }
  std::ifstream in(cfg.model_path);
  if (!in) throw std::runtime_error("cannot open file: " + cfg.model_path);
  json envelope = json::parse(in);
  TrainedModel model = model_from_json_string(envelope.at("model").dump());

  FeatureTable table = load_feature_csv(cfg.data_paths[0], cfg.label_column, {cfg.has_header});
  if (!envelope.at("normalization").is_null()) {
    MinMaxScaler scaler;
    scaler.col_min = envelope["normalization"]["col_min"].get<std::vector<double>>();
    scaler.col_max = envelope["normalization"]["col_max"].get<std::vector<double>>();
    apply_minmax_rows(table.features, table.n_features, scaler);
  }
  if (!model.support_vectors.empty() &&
      model.support_vectors[0].size() != table.n_features) {
    throw std::runtime_error("feature dimension does not match the model");
  }

  const bool with_labels = !table.raw_labels.empty();
  json rows = json::array();
  fs::path csv_path = fs::path(cfg.out_dir) / "predictions.csv";
  auto out = open_out(csv_path);
  write_meta(out, cfg);
  out << (with_labels ? "index,decision_value,predicted,label\n"
                      : "index,decision_value,predicted\n");
  for (std::size_t i = 0; i < table.n_samples; ++i) {
    std::span<const double> x{table.features.data() + i * table.n_features,
                              table.n_features};
    double dv = decision_value(model, x);
    int label = dv >= 0.0 ? 1 : -1;
    out << i << ',' << fmt_double(dv) << ',' << label;
    if (with_labels) out << ',' << table.raw_labels[i];
    out << "\n";
    json row;
    row["index"] = i;
    row["decision_value"] = dv;
    row["predicted"] = label;
    if (with_labels) row["label"] = table.raw_labels[i];
    rows.push_back(std::move(row));
  }
  note_written(csv_path);

  json report;
  report["meta"] = meta_json(cfg);
  report["predictions"] = std::move(rows);
  fs::path json_path = fs::path(cfg.out_dir) / "predictions.json";
  write_json_file(json_path, report);
  note_written(json_path);
  return 0;
}

int cmd_bench(const RunConfig& cfg) {
  validate_common(cfg);
  if (cfg.data_paths.empty()) throw std::runtime_error("bench needs at least one --data path");
  if (cfg.methods.empty()) throw std::runtime_error("bench needs at least one method");
  std::vector<Method> methods;
  std::set<std::string> seen;
  for (const auto& name : cfg.methods) {
    if (!seen.insert(name).second) throw std::runtime_error("duplicate method: " + name);
    methods.push_back(method_from_name(name));
  }

  std::vector<Dataset> datasets;
  std::set<std::string> names;
  for (const auto& path : cfg.data_paths) {
    LoadedDataset loaded = load_one(cfg, path);
    if (!names.insert(loaded.ds.name).second) {
      throw std::runtime_error("duplicate dataset name: " + loaded.ds.name);
    }
    datasets.push_back(std::move(loaded.ds));
  }

  ExperimentConfig e = experiment_config(cfg);
  BenchmarkResult result = run_benchmark(datasets, methods, cfg.reps, cfg.seed, e,
                                         cfg.ir_threshold, cfg.threads);

  fs::path report_csv = fs::path(cfg.out_dir) / "auc_report.csv";
  {
    auto out = open_out(report_csv);
    write_meta(out, cfg);
    out << "dataset,ir,method,reps,mean_auc,std_auc\n";
    for (const auto& rep : result.reports) {
      out << rep.dataset << ',' << fmt_double(rep.ir) << ',' << rep.method << ','
          << rep.rep_auc.size() << ',' << fmt_double(rep.mean_auc) << ','
          << fmt_double(rep.std_auc) << "\n";
    }
  }
  note_written(report_csv);

  const RankTable& table = result.rank_table;
  fs::path rank_csv = fs::path(cfg.out_dir) / "rank_table.csv";
  {
    auto out = open_out(rank_csv);
    write_meta(out, cfg);
    out << "dataset,ir";
    for (const auto& name : table.method_names) out << ',' << name;
    out << "\n";
    for (std::size_t d = 0; d < table.dataset_names.size(); ++d) {
      out << table.dataset_names[d] << ',' << fmt_double(table.dataset_ir[d]);
      for (double r : table.ranks[d]) out << ',' << fmt_double(r);
      out << "\n";
    }
    out << "avg_rank_all,";
    for (double r : table.avg_all) out << ',' << fmt_double(r);
    out << "\n";
    if (table.n_above > 0) {
      out << "avg_rank_ir_above," << fmt_double(table.ir_threshold);
      for (double r : table.avg_above) out << ',' << fmt_double(r);
      out << "\n";
    }
    if (table.n_below > 0) {
      out << "avg_rank_ir_below," << fmt_double(table.ir_threshold);
      for (double r : table.avg_below) out << ',' << fmt_double(r);
      out << "\n";
    }
  }
  note_written(rank_csv);

  json report;
  report["meta"] = meta_json(cfg);
  json reps = json::array();
  for (const auto& rep : result.reports) {
    json r;
    r["dataset"] = rep.dataset;
    r["ir"] = rep.ir;
    r["method"] = rep.method;
    r["reps"] = rep.rep_auc.size();
    r["seed"] = rep.seed;
    r["mean_auc"] = rep.mean_auc;
    r["std_auc"] = rep.std_auc;
    r["rep_auc"] = rep.rep_auc;
    reps.push_back(std::move(r));
  }
  report["reports"] = std::move(reps);
  json jt;
  jt["methods"] = table.method_names;
  jt["ir_threshold"] = table.ir_threshold;
  json rows = json::array();
  for (std::size_t d = 0; d < table.dataset_names.size(); ++d) {
    json row;
    row["dataset"] = table.dataset_names[d];
    row["ir"] = table.dataset_ir[d];
    row["ranks"] = table.ranks[d];
    rows.push_back(std::move(row));
  }
  jt["rows"] = std::move(rows);
  jt["avg_rank_all"] = table.avg_all;
  jt["avg_rank_ir_above"] = table.n_above > 0 ? json(table.avg_above) : json(nullptr);
  jt["avg_rank_ir_below"] = table.n_below > 0 ? json(table.avg_below) : json(nullptr);
  jt["n_above"] = table.n_above;
  jt["n_below"] = table.n_below;
  report["rank_table"] = std::move(jt);
  fs::path report_json = fs::path(cfg.out_dir) / "auc_report.json";
  write_json_file(report_json, report);
  note_written(report_json);
  return 0;
}

int cmd_compare(const RunConfig& cfg) {
  if (cfg.report_paths.empty()) throw std::runtime_error("--reports is required");
  if (cfg.champion.empty()) throw std::runtime_error("--champion is required");

  std::vector<std::string> methods;
  std::vector<std::string> datasets;
  std::map<std::string, double> irs;
  std::map<std::pair<std::string, std::string>, double> mean_auc;
  for (const auto& path : cfg.report_paths) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    json j = json::parse(in);
    for (const auto& rep : j.at("reports")) {
      std::string dataset = rep.at("dataset").get<std::string>();
      std::string method = rep.at("method").get<std::string>();
      if (std::find(datasets.begin(), datasets.end(), dataset) == datasets.end()) {
        datasets.push_back(dataset);
      }
      if (std::find(methods.begin(), methods.end(), method) == methods.end()) {
        methods.push_back(method);
      }
      irs[dataset] = rep.at("ir").get<double>();
      auto key = std::make_pair(dataset, method);
      if (mean_auc.count(key)) {
        throw std::runtime_error("duplicate report entry for dataset '" + dataset +
                                 "', method '" + method + "'");
      }
      mean_auc[key] = rep.at("mean_auc").get<double>();
    }
  }
  if (std::find(methods.begin(), methods.end(), cfg.champion) == methods.end()) {
    throw std::runtime_error("champion '" + cfg.champion + "' not present in the reports");
  }
  for (const auto& dataset : datasets) {
    for (const auto& method : methods) {
      if (!mean_auc.count({dataset, method})) {
        throw std::runtime_error("missing entry for dataset '" + dataset +
                                 "', method '" + method + "'");
      }
    }
  }
  if (methods.size() == 1) {
    std::cout << "nothing to compare: only the champion method is present\n";
  }

  struct Segment {
    std::string name;
    std::vector<std::string> datasets;
  };
  std::vector<Segment> segments{{"all", {}}, {"ir_above", {}}, {"ir_below", {}}};
  for (const auto& dataset : datasets) {
    segments[0].datasets.push_back(dataset);
    (irs[dataset] > cfg.ir_threshold ? segments[1] : segments[2]).datasets.push_back(dataset);
  }

  json out_segments = json::array();
  for (const auto& segment : segments) {
    if (segment.datasets.empty()) continue;

    std::vector<double> rank_sum(methods.size(), 0.0);
    for (const auto& dataset : segment.datasets) {
      std::vector<double> values(methods.size());
      for (std::size_t m = 0; m < methods.size(); ++m) {
        values[m] = mean_auc.at({dataset, methods[m]});
      }
      auto ranks = rank_descending(values);
      for (std::size_t m = 0; m < methods.size(); ++m) rank_sum[m] += ranks[m];
    }
    std::vector<std::pair<std::string, double>> avg_ranks;
    for (std::size_t m = 0; m < methods.size(); ++m) {
      avg_ranks.emplace_back(methods[m], rank_sum[m] / static_cast<double>(segment.datasets.size()));
    }

    auto holm = holm_test(avg_ranks, cfg.champion, segment.datasets.size());

    fs::path holm_csv = fs::path(cfg.out_dir) / ("holm_" + segment.name + ".csv");
    {
      auto out = open_out(holm_csv);
      write_meta(out, cfg);
      out << "method,z,p,adjusted_alpha,hypothesis\n";
      for (const auto& row : holm) {
        out << row.method << ',' << fmt_double(row.z) << ',' << fmt_double(row.p) << ','
            << fmt_double(row.adjusted_alpha) << ','
            << (row.rejected ? "rejected" : "not rejected") << "\n";
      }
    }
    note_written(holm_csv);

    std::vector<double> champ_values;
    for (const auto& dataset : segment.datasets) {
      champ_values.push_back(mean_auc.at({dataset, cfg.champion}));
    }
    json wilcoxon_rows = json::array();
    fs::path wilcoxon_csv = fs::path(cfg.out_dir) / ("wilcoxon_" + segment.name + ".csv");
    {
      auto out = open_out(wilcoxon_csv);
      write_meta(out, cfg);
      out << "method,statistic,z,p,hypothesis\n";
      for (const auto& method : methods) {
        if (method == cfg.champion) continue;
        std::vector<double> values;
        for (const auto& dataset : segment.datasets) {
          values.push_back(mean_auc.at({dataset, method}));
        }
        json row;
        row["method"] = method;
        try {
          WilcoxonResult res = wilcoxon_signed_rank(champ_values, values);
          const char* hypothesis = res.p < 0.05 ? "rejected" : "not rejected";
          out << method << ',' << fmt_double(res.statistic) << ',' << fmt_double(res.z)
              << ',' << fmt_double(res.p) << ',' << hypothesis << "\n";
          row["statistic"] = res.statistic;
          row["z"] = res.z;
          row["p"] = res.p;
          row["hypothesis"] = hypothesis;
        } catch (const std::exception& err) {
          out << method << ",,,,n/a\n";
          row["statistic"] = nullptr;
          row["z"] = nullptr;
          row["p"] = nullptr;
          row["hypothesis"] = std::string("n/a: ") + err.what();
        }
        wilcoxon_rows.push_back(std::move(row));
      }
    }
    note_written(wilcoxon_csv);

    json seg;
    seg["name"] = segment.name;
    seg["n_datasets"] = segment.datasets.size();
    json ranks = json::object();
    for (const auto& [name, rank] : avg_ranks) ranks[name] = rank;
    seg["avg_ranks"] = std::move(ranks);
    json holm_rows = json::array();
    for (const auto& row : holm) {
      json r;
      r["method"] = row.method;
      r["z"] = row.z;
      r["p"] = row.p;
      r["adjusted_alpha"] = row.adjusted_alpha;
      r["rejected"] = row.rejected;
      holm_rows.push_back(std::move(r));
    }
    seg["holm"] = std::move(holm_rows);
    seg["wilcoxon"] = std::move(wilcoxon_rows);
    out_segments.push_back(std::move(seg));
  }

  json report;
  report["meta"] = meta_json(cfg);
  report["champion"] = cfg.champion;
  report["segments"] = std::move(out_segments);
  fs::path compare_json = fs::path(cfg.out_dir) / "compare.json";
  write_json_file(compare_json, report);
  note_written(compare_json);
  return 0;
}

namespace {

// Binds the flag set shared by the data-consuming commands.
struct FlagBuffers {
  std::string data;
  std::string methods;
  std::string c_grid;
  std::string k_grid;
  std::string reports;
  std::string config_file;
};

// Flat key=value defaults, one per line; keys are long flag names without the
// leading dashes. Values only fill flags the command line left unset, so
// explicit flags always win. Returns the extra argv tokens to append.
std::vector<std::string> config_file_tokens(const std::string& path,
                                            const std::vector<std::string>& args) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file '" + path + "'");
  auto trim = [](const std::string& s) {
    const char* ws = " \t\r";
    auto b = s.find_first_not_of(ws);
    if (b == std::string::npos) return std::string();
    return s.substr(b, s.find_last_not_of(ws) - b + 1);
  };
  auto given = [&args](const std::string& name) {
    for (const auto& a : args)
      if (a == name || a.rfind(name + "=", 0) == 0) return true;
    return false;
  };
  std::vector<std::string> extra;
  std::string line;
  while (std::getline(in, line)) {
    std::string entry = trim(line);
    if (entry.empty() || entry[0] == '#' || entry[0] == ';') continue;
    auto eq = entry.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line '" + entry + "' is not key=value");
    std::string key = trim(entry.substr(0, eq));
    std::string value = trim(entry.substr(eq + 1));
    if (key.empty()) throw std::runtime_error("config line '" + entry + "' has no key");
    if (key == "config") continue;
    std::string twin =
        key.rfind("no-", 0) == 0 ? key.substr(3) : std::string("no-") + key;
    if (given("--" + key) || given("--" + twin)) continue;
    extra.push_back("--" + key + "=" + value);
  }
  return extra;
}

void add_output_flags(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--out-dir", cfg.out_dir, "output directory")->capture_default_str();
  sub->add_option("--seed", cfg.seed, "random seed recorded in every output")
      ->capture_default_str();
}

void add_data_flags(CLI::App* sub, RunConfig& cfg, FlagBuffers& raw) {
  sub->add_option("--data", raw.data, "dataset CSV path(s), comma separated")->required();
  sub->add_option("--label-col", cfg.label_column,
                  "label column, by header name or zero-based index");
  sub->add_option("--minority-label", cfg.minority_label,
                  "raw label value of the minority class");
  sub->add_flag("--header,!--no-header", cfg.has_header,
                "whether the first CSV row is a header");
  sub->add_flag("--normalize,!--no-normalize", cfg.normalize,
                "min-max normalize features onto [-1, 1]");
}

void add_protocol_flags(CLI::App* sub, RunConfig& cfg, FlagBuffers& raw) {
  sub->add_option("--method", raw.methods, "method(s): svm, usvm, cssvm, efsvm, iefsvm")
      ->capture_default_str();
  sub->add_option("--kernel", cfg.kernel, "kernel: rbf or linear")->capture_default_str();
  sub->add_option("--gamma", cfg.gamma, "rbf width; 0 selects 1/n_features")
      ->capture_default_str();
  sub->add_option("--c-grid", raw.c_grid, "soft-margin penalty grid, comma separated");
  sub->add_option("--k-grid", raw.k_grid, "neighborhood size grid, comma separated");
  sub->add_option("--folds", cfg.folds, "cross-validation folds")->capture_default_str();
  sub->add_option("--threads", cfg.threads, "worker threads; 0 = hardware")
      ->capture_default_str();
}

void finalize_raw(const FlagBuffers& raw, RunConfig& cfg) {
  if (!raw.data.empty()) cfg.data_paths = split_list(raw.data);
  if (!raw.methods.empty()) cfg.methods = split_list(raw.methods);
  if (!raw.c_grid.empty()) cfg.c_grid = parse_double_list(raw.c_grid, "--c-grid");
  if (!raw.k_grid.empty()) cfg.k_grid = parse_int_list(raw.k_grid, "--k-grid");
  if (!raw.reports.empty()) cfg.report_paths = split_list(raw.reports);
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"entropy-weighted support vector machines for imbalanced data",
               "iefsvm"};
  app.set_version_flag("--version", kToolkitVersion);
  app.require_subcommand(1);

  RunConfig cfg;
  FlagBuffers raw;

  auto* patterns = app.add_subcommand("patterns", "emit the neighborhood pattern atlas");
  add_output_flags(patterns, cfg);
  patterns->add_option("--config", raw.config_file, "flat key=value file of flag defaults")
      ->check(CLI::ExistingFile);

  auto* train = app.add_subcommand("train", "train one method on a dataset");
  add_data_flags(train, cfg, raw);
  add_protocol_flags(train, cfg, raw);
  add_output_flags(train, cfg);
  train->add_flag("--dump-memberships", cfg.dump_memberships,
                  "also write per-sample membership values");
  train->add_option("--config", raw.config_file, "flat key=value file of flag defaults")
      ->check(CLI::ExistingFile);

  auto* predict = app.add_subcommand("predict", "score a feature CSV with a saved model");
  predict->add_option("--model", cfg.model_path, "model JSON written by train")->required();
  predict->add_option("--data", raw.data, "feature CSV path")->required();
  predict->add_option("--label-col", cfg.label_column,
                      "optional label column to carry through");
  predict->add_flag("--header,!--no-header", cfg.has_header,
                    "whether the first CSV row is a header");
  add_output_flags(predict, cfg);
  predict->add_option("--config", raw.config_file, "flat key=value file of flag defaults")
      ->check(CLI::ExistingFile);

  auto* bench = app.add_subcommand("bench", "repeated cross-validated benchmark");
  add_data_flags(bench, cfg, raw);
  add_protocol_flags(bench, cfg, raw);
  add_output_flags(bench, cfg);
  bench->add_option("--reps", cfg.reps, "experiment repetitions")->capture_default_str();
  bench->add_option("--ir-threshold", cfg.ir_threshold,
                    "imbalance ratio splitting the rank summary")
      ->capture_default_str();
  bench->add_option("--config", raw.config_file, "flat key=value file of flag defaults")
      ->check(CLI::ExistingFile);

  auto* compare = app.add_subcommand("compare", "rank and test methods from bench reports");
  compare->add_option("--reports", raw.reports, "bench JSON report path(s), comma separated")
      ->required();
  compare->add_option("--champion", cfg.champion, "reference method")->capture_default_str();
  compare->add_option("--ir-threshold", cfg.ir_threshold,
                      "imbalance ratio splitting the segments")
      ->capture_default_str();
  add_output_flags(compare, cfg);
  compare->add_option("--config", raw.config_file, "flat key=value file of flag defaults")
      ->check(CLI::ExistingFile);

  std::vector<std::string> args(argv + 1, argv + argc);
  std::string config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size())
      config_path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0)
      config_path = args[i].substr(9);
  }
  if (!config_path.empty()) {
    try {
      for (auto& tok : config_file_tokens(config_path, args)) args.push_back(tok);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    }
  }
  std::reverse(args.begin(), args.end());
  try {
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    finalize_raw(raw, cfg);
    if (patterns->parsed()) return cmd_patterns(cfg);
    if (train->parsed()) return cmd_train(cfg);
    if (predict->parsed()) return cmd_predict(cfg);
    if (bench->parsed()) return cmd_bench(cfg);
    if (compare->parsed()) return cmd_compare(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace iefsvm
