#include <CLI11.hpp>

#include "mmsb/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"mmsb: multimodal sentiment benchmark runner"};
  app.require_subcommand(1);

  mmsb::cli::RunOptions run_opts;
  auto* run = app.add_subcommand("run", "run the configured experiment");
  run->add_option("config", run_opts.config_path, "experiment config (JSON)")
      ->required();
  run->add_option("--out", run_opts.out_dir_override, "override output directory");
  run->add_option("--workers", run_opts.workers,
                  "worker threads for the modality grid (default: config, "
                  "then MMSB_WORKERS)");
  run->add_flag("--overwrite", run_opts.overwrite,
                "allow writing into a non-empty output directory");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "check a config without running");
  validate->add_option("config", validate_path, "experiment config (JSON)")
      ->required();

  mmsb::cli::RunOptions project_opts;
  auto* project = app.add_subcommand("project", "t-SNE projection export only");
  project->add_option("config", project_opts.config_path, "experiment config (JSON)")
      ->required();
  project->add_option("--out", project_opts.out_dir_override,
                      "override output directory");
  project->add_flag("--overwrite", project_opts.overwrite,
                    "allow writing into a non-empty output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    // CLI11 returns 0 for --help; anything else is a usage error
    return code == 0 ? mmsb::cli::kExitOk : mmsb::cli::kExitConfigError;
  }

  if (run->parsed()) return mmsb::cli::run_experiment(run_opts);
  if (validate->parsed()) return mmsb::cli::validate_config(validate_path);
  return mmsb::cli::run_projection_only(project_opts);
}
