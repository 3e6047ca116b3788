#include <filesystem>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rvseg/config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Online referring video segmentation simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<int> window;
  std::optional<std::string> suite;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "Run configuration file (JSON)")
        ->required();
    cmd->add_option("--seed", seed, "Override the config's seed list with one seed");
    cmd->add_option("--out", out_dir, "Override the output directory");
    cmd->add_option("--window", window, "Override the clip window (0 = online)");
    cmd->add_option("--suite", suite, "Override the scenario with a builtin suite");
  };

  CLI::App* run = app.add_subcommand("run", "Execute the configured run(s)");
  add_common(run);

  CLI::App* ablate =
      app.add_subcommand("ablate", "Run the ablation grids and emit tables");
  add_common(ablate);

  std::string pred_dir;
  std::string gt_dir;
  std::optional<std::string> eval_out;
  CLI::App* eval = app.add_subcommand(
      "eval", "Score prediction masks against ground-truth masks (RLE files)");
  eval->add_option("pred_dir", pred_dir, "Directory of frame_*.rle predictions")
      ->required();
  eval->add_option("gt_dir", gt_dir, "Directory of frame_*.rle ground truth")
      ->required();
  eval->add_option("--out", eval_out, "Write the metrics report to this file");

  CLI11_PARSE(app, argc, argv);

  rvseg::CliOverrides ov;
  ov.seed = seed;
  ov.output_dir = out_dir;
  ov.window = window;
  ov.suite = suite;

  if (run->parsed()) return rvseg::cmd_run(config_path, ov);
  if (ablate->parsed()) return rvseg::cmd_ablate(config_path, ov);
  if (eval->parsed()) {
    std::optional<std::filesystem::path> out;
    if (eval_out) out = *eval_out;
    return rvseg::cmd_eval(pred_dir, gt_dir, out);
  }
  return 2;
}
