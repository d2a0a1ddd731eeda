#include "pcbench/cli.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "pcbench/dataset_io.hpp"
#include "pcbench/errors.hpp"

namespace pcbench {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

double parse_fraction(const std::string& text) {
  double v = 0.0;
  try {
    std::size_t used = 0;
    v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
  } catch (const std::exception&) {
    throw UsageError("malformed budget fraction '" + text + "'");
  }
  if (!(v > 0.0 && v <= 1.0)) {
    throw UsageError("budget fraction " + text + " outside (0, 1]");
  }
  return v;
}

std::vector<std::string> parse_samplers(const std::string& text) {
  std::vector<std::string> names = split(text, ',');
  if (names.empty()) throw UsageError("empty sampler list");
  for (const std::string& name : names) {
    if (!is_sampler_name(name)) {
      std::string valid;
      for (const auto& s : kSamplerNames) {
        if (!valid.empty()) valid += ", ";
        valid += s;
      }
      throw UsageError("unknown sampler '" + name + "' (valid: " + valid + ")");
    }
  }
  return names;
}

SyntheticSource parse_synthetic_source(const std::string& text) {
  SyntheticSource src;
  for (const std::string& item : split(text, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw UsageError("malformed --synthetic item '" + item + "' (expected key=value)");
    }
    const std::string key = item.substr(0, eq);
    int value = 0;
    try {
      value = std::stoi(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw UsageError("malformed --synthetic value in '" + item + "'");
    }
    if (key == "n") {
      src.n = value;
    } else if (key == "refs") {
      src.refs = value;
    } else {
      throw UsageError("unknown --synthetic key '" + key + "' (valid: n, refs)");
    }
  }
  if (src.n < 2) throw UsageError("--synthetic n must be at least 2");
  if (src.refs < 1) throw UsageError("--synthetic refs must be at least 1");
  return src;
}

}  // namespace

std::vector<double> parse_budget_list(const std::string& text) {
  std::vector<double> fractions;
  if (text.find(':') != std::string::npos) {
    const std::vector<std::string> parts = split(text, ':');
    if (parts.size() != 3) {
      throw UsageError("budget range must be lo:hi:step, got '" + text + "'");
    }
    const double lo = parse_fraction(parts[0]);
    const double hi = parse_fraction(parts[1]);
    double step = 0.0;
    try {
      step = std::stod(parts[2]);
    } catch (const std::exception&) {
      throw UsageError("malformed budget step '" + parts[2] + "'");
    }
    if (!(step > 0.0)) throw UsageError("budget step must be positive");
    if (hi < lo) throw UsageError("budget range upper bound below lower bound");
    for (int k = 0;; ++k) {
      const double v = lo + k * step;
      if (v > hi + 1e-9) break;
      fractions.push_back(std::min(v, 1.0));
    }
  } else {
    for (const std::string& item : split(text, ',')) {
      fractions.push_back(parse_fraction(item));
    }
  }
  if (fractions.empty()) throw UsageError("empty budget list");
  std::sort(fractions.begin(), fractions.end());
  fractions.erase(std::unique(fractions.begin(), fractions.end()), fractions.end());
  return fractions;
}

CliOptions parse_cli(const std::vector<std::string>& args) {
  CLI::App app{"pairwise-comparison sampling benchmark"};
  app.require_subcommand(0, 1);

  CliOptions out;

  // run
  CLI::App* run = app.add_subcommand("run", "simulate samplers against a dataset");
  std::string dataset, synthetic, samplers, budgets, scoring = "bt",
              oracle = "replace", gt = "analytic";
  samplers = "hr-random,swiss,crowd-bt,hr-active,hybrid-mst,asap";
  auto* dataset_opt = run->add_option("--dataset", dataset, "dataset file (JSON)");
  auto* synthetic_opt = run->add_option(
      "--synthetic", synthetic, "synthetic source, e.g. n=16,refs=1");
  run->add_option("--samplers", samplers, "comma list of sampler names");
  run->add_option("--budgets", budgets, "fractions as lo:hi:step or comma list")
      ->required();
  run->add_option("--reps", out.run.config.repetitions, "repetitions per trial")
      ->default_val(100);
  run->add_option("--subjects", out.run.config.subjects,
                  "subjects defining the complete-design budget axis")
      ->default_val(15);
  run->add_option("--seed", out.run.config.master_seed, "master seed")
      ->default_val(1);
  run->add_option("--scoring", scoring, "scoring backend: bt | hodgerank");
  run->add_option("--oracle", oracle, "judgment draw mode: replace | exhaust");
  run->add_option("--gt", gt, "synthetic ground truth: analytic | simulated");
  run->add_option("--init-value", out.run.config.init_value,
                  "initial count per off-diagonal cell")
      ->default_val(1.0);
  run->add_option("--threads", out.run.config.threads,
                  "worker threads (0 = hardware)")
      ->default_val(0);
  run->add_option("--out", out.run.out_path, "output CSV path")
      ->default_val("results.csv");

  // synth
  CLI::App* synth = app.add_subcommand("synth", "generate a synthetic oracle spec");
  synth->add_option("--n", out.synth.n, "stimuli per reference")->default_val(16);
  synth->add_option("--refs", out.synth.refs, "number of references")->default_val(1);
  synth->add_option("--seed", out.synth.seed, "generation seed")->default_val(1);
  synth->add_option("--out", out.synth.out_path, "output JSON path")
      ->default_val("synthetic.json");

  // plot
  CLI::App* plot = app.add_subcommand("plot", "render a results CSV to SVG");
  plot->add_option("--in", out.plot.in_path, "results CSV")->required();
  plot->add_option("--out", out.plot.out_path, "output SVG path")->required();
  plot->add_flag("--fisher", out.plot.use_fisher,
                 "plot arctanh(PLCC) instead of raw PLCC");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out.command = CliOptions::Command::kHelp;
    out.help_text = app.help();
    return out;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  if (run->parsed()) {
    out.command = CliOptions::Command::kRun;
    if (dataset_opt->count() > 0 && synthetic_opt->count() > 0) {
      throw UsageError("--dataset and --synthetic are mutually exclusive");
    }
    if (dataset_opt->count() == 0 && synthetic_opt->count() == 0) {
      throw UsageError("run needs --dataset or --synthetic");
    }
    if (synthetic_opt->count() > 0) {
      out.run.use_synthetic = true;
      out.run.synthetic = parse_synthetic_source(synthetic);
    } else {
      out.run.dataset_path = dataset;
    }
    out.run.config.samplers = parse_samplers(samplers);
    out.run.config.fractions = parse_budget_list(budgets);
    if (scoring == "bt") {
      out.run.config.scoring = ScoringBackend::kBt;
    } else if (scoring == "hodgerank") {
      out.run.config.scoring = ScoringBackend::kHodgeRank;
    } else {
      throw UsageError("unknown scoring backend '" + scoring + "' (valid: bt, hodgerank)");
    }
    if (oracle == "replace") {
      out.run.oracle_mode = EmpiricalMode::kWithReplacement;
    } else if (oracle == "exhaust") {
      out.run.oracle_mode = EmpiricalMode::kWithoutReplacement;
    } else {
      throw UsageError("unknown oracle mode '" + oracle + "' (valid: replace, exhaust)");
    }
    if (gt == "analytic") {
      out.run.gt_mode = SyntheticGroundTruth::kAnalytic;
    } else if (gt == "simulated") {
      out.run.gt_mode = SyntheticGroundTruth::kSimulated;
    } else {
      throw UsageError("unknown ground-truth mode '" + gt + "' (valid: analytic, simulated)");
    }
    if (out.run.config.repetitions < 1) throw UsageError("--reps must be at least 1");
    if (out.run.config.subjects < 1) throw UsageError("--subjects must be at least 1");
    if (out.run.config.init_value < 0.0) throw UsageError("--init-value must be nonnegative");
    return out;
  }
  if (synth->parsed()) {
    out.command = CliOptions::Command::kSynth;
    if (out.synth.n < 2) throw UsageError("--n must be at least 2");
    if (out.synth.refs < 1) throw UsageError("--refs must be at least 1");
    return out;
  }
  if (plot->parsed()) {
    out.command = CliOptions::Command::kPlot;
    return out;
  }
  out.command = CliOptions::Command::kHelp;
  out.help_text = app.help();
  return out;
}

namespace {

// Synthetic reference population derived from the master seed alone, so the
// same seed reproduces the same dataset in `run` and `synth`.
std::vector<Reference> make_synthetic_references(int n, int refs, std::uint64_t seed,
                                                 SyntheticGroundTruth gt_mode) {
  std::vector<Reference> out;
  out.reserve(refs);
  for (int r = 0; r < refs; ++r) {
    char id[32];
    std::snprintf(id, sizeof(id), "synth-%02d", r);
    Rng rng(derive_seed(seed, id, "synthetic-dataset", 0.0, r));
    auto oracle = std::make_unique<SyntheticOracle>(synth_generate(n, rng));
    if (gt_mode == SyntheticGroundTruth::kSimulated) {
      oracle->set_ground_truth_mode(gt_mode,
                                    derive_seed(seed, id, "synthetic-gt", 0.0, r));
    }
    out.push_back({id, std::move(oracle)});
  }
  return out;
}

int do_run(const RunOptions& options) {
  Experiment experiment;
  if (options.use_synthetic) {
    experiment.dataset_name = "synthetic";
    experiment.references =
        make_synthetic_references(options.synthetic.n, options.synthetic.refs,
                                  options.config.master_seed, options.gt_mode);
  } else if (dataset_is_empirical(options.dataset_path)) {
    LoadedDataset dataset = load_dataset(options.dataset_path);
    experiment.dataset_name = dataset.name;
    for (auto& ref : dataset.references) {
      experiment.references.push_back(
          {ref.id, std::make_unique<EmpiricalOracle>(std::move(ref.pcm),
                                                     options.oracle_mode)});
    }
  } else {
    SyntheticSpec spec = load_synthetic_spec(options.dataset_path);
    experiment.dataset_name = spec.name;
    int r = 0;
    for (auto& ref : spec.references) {
      auto oracle = std::make_unique<SyntheticOracle>(std::move(ref.oracle));
      if (options.gt_mode == SyntheticGroundTruth::kSimulated) {
        oracle->set_ground_truth_mode(
            options.gt_mode,
            derive_seed(options.config.master_seed, ref.id, "synthetic-gt", 0.0, r));
      }
      experiment.references.push_back({ref.id, std::move(oracle)});
      ++r;
    }
  }

  const ExperimentResult result = run_experiment(experiment, options.config);
  const ResultsTable table =
      to_results_table(experiment.dataset_name, result.aggregate);
  write_results(table, options.out_path);
  std::cout << "wrote " << table.rows.size() << " rows to " << options.out_path
            << '\n';
  return 0;
}

int do_synth(const SynthOptions& options) {
  SyntheticSpec spec;
  spec.name = "synthetic";
  for (int r = 0; r < options.refs; ++r) {
    char id[32];
    std::snprintf(id, sizeof(id), "synth-%02d", r);
    Rng rng(derive_seed(options.seed, id, "synthetic-dataset", 0.0, r));
    spec.references.push_back({id, synth_generate(options.n, rng)});
  }
  save_synthetic_spec(spec, options.out_path);
  std::cout << "wrote " << spec.references.size() << " reference(s) to "
            << options.out_path << '\n';
  return 0;
}

int do_plot(const PlotOptions& options) {
  const ResultsTable table = read_results(options.in_path);
  emit_plot(table, options.out_path, options.use_fisher);
  std::cout << "wrote " << options.out_path << '\n';
  return 0;
}

}  // namespace

int run_cli(const CliOptions& options) {
  switch (options.command) {
    case CliOptions::Command::kHelp:
      std::cout << options.help_text;
      return 0;
    case CliOptions::Command::kRun:
      return do_run(options.run);
    case CliOptions::Command::kSynth:
      return do_synth(options.synth);
    case CliOptions::Command::kPlot:
      return do_plot(options.plot);
  }
  return 1;
}

}  // namespace pcbench
