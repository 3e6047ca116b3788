#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rvseg/runner.hpp"

namespace rvseg {

// Where the video comes from: a builtin suite family (regenerated per run
// seed) or a scenario file (fixed across seeds).
struct ScenarioRef {
  std::string suite;
  std::string path;
};

struct AblationSpec {
  std::vector<std::string> suites = {"occlusion", "distractors"};
  std::vector<std::string> axes = {"update-flags", "method", "top-k",
                                   "initial-queries"};
};

struct RunConfig {
  ScenarioRef scenario;
  OracleParams oracle;
  PropagationConfig propagation;
  MatchCostWeights weights;
  int window = 0;  // 0 = online (equivalent to window 1)
  std::vector<std::uint64_t> seeds = {0};
  std::string output_dir = "out";
  bool dump_masks = false;
  AblationSpec ablation;
};

void validate(const RunConfig& config);

RunConfig load_run_config(const std::filesystem::path& path);

ScenarioSpec load_scenario(const std::filesystem::path& path);
void save_scenario(const ScenarioSpec& spec, const std::filesystem::path& path);

// CLI overrides; only set fields replace config values.
struct CliOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output_dir;
  std::optional<int> window;
  std::optional<std::string> suite;
};

// Command drivers behind the CLI. Exit codes: 0 success, 1 runtime error,
// 2 configuration/validation error.
int cmd_run(const std::filesystem::path& config_path, const CliOverrides& ov);
int cmd_ablate(const std::filesystem::path& config_path, const CliOverrides& ov);
int cmd_eval(const std::filesystem::path& pred_dir,
             const std::filesystem::path& gt_dir,
             const std::optional<std::filesystem::path>& out_file);

}  // namespace rvseg
