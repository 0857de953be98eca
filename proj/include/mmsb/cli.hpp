#pragma once

#include <string>

namespace mmsb::cli {

// Exit codes shared by all subcommands.
constexpr int kExitOk = 0;
constexpr int kExitConfigError = 2;
constexpr int kExitDataError = 3;
constexpr int kExitDivergence = 4;

struct RunOptions {
  std::string config_path;
  std::string out_dir_override;  // empty: use the config's output_dir
  int workers = 0;               // 0: config value, then MMSB_WORKERS, then 1
  bool overwrite = false;
};

// `run`: executes the configured experiment and writes result tables,
// metrics, checkpoints, projections, and a run manifest to the output dir.
int run_experiment(const RunOptions& opts);

// `validate`: parses and validates the config without running anything.
int validate_config(const std::string& config_path);

// `project`: t-SNE export only.
int run_projection_only(const RunOptions& opts);

}  // namespace mmsb::cli
