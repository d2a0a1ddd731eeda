#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pcbench/harness.hpp"

namespace pcbench {

struct SyntheticSource {
  int n = 16;
  int refs = 1;
};

struct RunOptions {
  std::string dataset_path;  // empty when synthetic
  SyntheticSource synthetic;
  bool use_synthetic = false;
  EmpiricalMode oracle_mode = EmpiricalMode::kWithReplacement;
  SyntheticGroundTruth gt_mode = SyntheticGroundTruth::kAnalytic;
  std::string out_path = "results.csv";
  ExperimentConfig config;
};

struct SynthOptions {
  int n = 16;
  int refs = 1;
  std::uint64_t seed = 1;
  std::string out_path = "synthetic.json";
};

struct PlotOptions {
  std::string in_path;
  std::string out_path;
  bool use_fisher = false;
};

struct CliOptions {
  enum class Command { kHelp, kRun, kSynth, kPlot };
  Command command = Command::kHelp;
  std::string help_text;
  RunOptions run;
  SynthOptions synth;
  PlotOptions plot;
};

// Parses the argument vector (without argv[0]). Throws UsageError on any
// malformed input; the caller maps that to exit code 2.
CliOptions parse_cli(const std::vector<std::string>& args);

// Expands "lo:hi:step" or a comma list into ascending fractions in (0, 1].
std::vector<double> parse_budget_list(const std::string& text);

// Executes a parsed command; returns the process exit code.
int run_cli(const CliOptions& options);

}  // namespace pcbench
