#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace iefsvm {

inline constexpr const char* kToolkitVersion = "0.1.0";

/// Settings shared by the commands.  Flags override config-file entries,
/// which override the defaults below.
struct RunConfig {
  std::vector<std::string> data_paths;
  std::string label_column;
  std::string minority_label;
  bool has_header = true;
  std::vector<std::string> methods{"iefsvm"};
  std::string kernel = "rbf";
  double gamma = 0.0;  ///< 0 selects 1 / n_features
  std::vector<double> c_grid{0.015625, 0.0625, 0.25, 1.0, 4.0, 16.0, 64.0};
  std::vector<int> k_grid{1, 3, 5, 7, 9, 11, 13, 15};
  std::size_t folds = 5;
  std::size_t reps = 20;
  std::uint64_t seed = 42;
  double ir_threshold = 3.3;
  bool normalize = true;
  bool dump_memberships = false;
  std::string model_path;                 ///< predict input
  std::vector<std::string> report_paths;  ///< compare inputs
  std::string champion = "iefsvm";        ///< compare reference method

  // Not part of the recorded configuration: neither changes any result.
  std::string out_dir = "out";
  std::size_t threads = 0;
};

/// Hash of the result-determining configuration; embedded in every output so
/// reruns with the same settings are byte-identical.
std::string config_hash(const RunConfig& cfg);

std::string config_to_json_string(const RunConfig& cfg);
RunConfig config_from_json_string(const std::string& text);

int cmd_patterns(const RunConfig& cfg);
int cmd_train(const RunConfig& cfg);
int cmd_predict(const RunConfig& cfg);
int cmd_bench(const RunConfig& cfg);
int cmd_compare(const RunConfig& cfg);

int run_cli(int argc, char** argv);

}  // namespace iefsvm
