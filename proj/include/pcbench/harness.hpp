#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pcbench/oracle.hpp"
#include "pcbench/pcm.hpp"
#include "pcbench/samplers.hpp"
#include "pcbench/scaling.hpp"

namespace pcbench {

struct ExperimentConfig {
  std::vector<std::string> samplers;   // canonical sampler names
  std::vector<double> fractions;       // budget fractions, ascending, in (0, 1]
  int subjects = 15;                   // defines the complete-design budget axis
  int repetitions = 100;
  std::uint64_t master_seed = 1;
  ScoringBackend scoring = ScoringBackend::kBt;
  double init_value = 1.0;             // trial matrix initialization
  int threads = 0;                     // 0: hardware concurrency
  SamplerOptions sampler_options;
};

// One reference stimulus set with its judgment source.
struct Reference {
  std::string id;
  std::unique_ptr<JudgmentOracle> oracle;
};

struct Experiment {
  std::string dataset_name;
  std::vector<Reference> references;
};

struct TrialResult {
  std::string sampler;
  std::string reference;
  double fraction = 0.0;
  int repetition = 0;
  std::optional<double> plcc;   // absent when the correlation is undefined
  std::optional<double> srocc;
  int judgments = 0;
};

// Mean/std over repetitions, then averaged over references.
struct AggregateRow {
  std::string sampler;
  double fraction = 0.0;
  double plcc_mean = 0.0;
  double plcc_std = 0.0;
  double srocc_mean = 0.0;
  double srocc_std = 0.0;
  int repetitions = 0;
  int references = 0;
};

struct ExperimentResult {
  std::vector<AggregateRow> aggregate;  // sampler-major, fractions ascending
  std::vector<TrialResult> trials;
};

// Comparison budget for a fraction of the subjects x n(n-1)/2 complete
// design, rounded half up and floored at one judgment.
int budget_from_fraction(double fraction, int n, int subjects);

struct TrialOutput {
  QualityScores scores;
  PCMatrix pcm;
};

// One simulated incomplete test: initialize the matrix, loop
// select -> judge -> record -> feed back until exactly `budget` judgments
// are recorded, then scale.
TrialOutput run_trial(JudgmentOracle& oracle, Sampler& sampler, int budget,
                      ScoringBackend scoring, double init_value, Rng& rng);

// Full sweep over (reference, sampler, fraction, repetition). Trials run in
// parallel; every trial derives its stream from its coordinates, so the
// results do not depend on scheduling or on sampler list order.
ExperimentResult run_experiment(const Experiment& experiment,
                                const ExperimentConfig& config);

}  // namespace pcbench
