#include "pcbench/harness.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "pcbench/errors.hpp"
#include "pcbench/metrics.hpp"

namespace pcbench {

int budget_from_fraction(double fraction, int n, int subjects) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw std::invalid_argument("budget fraction must lie in (0, 1]");
  }
  if (n < 2) throw InvalidDimension("need at least two stimuli");
  if (subjects < 1) throw std::invalid_argument("subjects must be at least 1");
  const double pairs = static_cast<double>(n) * (n - 1) / 2.0;
  const int budget = static_cast<int>(std::floor(fraction * subjects * pairs + 0.5));
  return std::max(budget, 1);
}

TrialOutput run_trial(JudgmentOracle& oracle, Sampler& sampler, int budget,
                      ScoringBackend scoring, double init_value, Rng& rng) {
  if (budget < 0) throw std::invalid_argument("budget must be nonnegative");
  PCMatrix pcm(oracle.size(), init_value);
  int used = 0;
  while (used < budget) {
    const std::vector<Pair> batch = sampler.next_batch(pcm, budget - used, rng);
    if (batch.empty() || static_cast<int>(batch.size()) > budget - used) {
      throw Error("sampler '" + std::string(sampler.name()) +
                  "' violated the batch size contract");
    }
    for (const Pair& p : batch) {
      const Judgment j = oracle.judge(p, rng);
      pcm.record(j);
      sampler.observe(j);
      ++used;
    }
  }
  return TrialOutput{fit_scores(pcm, scoring), std::move(pcm)};
}

namespace {

struct TrialTask {
  int reference_index;
  int sampler_index;
  int fraction_index;
  int repetition;
};

struct Accumulator {
  double mean = 0.0;
  double stddev = 0.0;
  int count = 0;
};

// Sample mean and standard deviation over the defined values only.
Accumulator summarize(const std::vector<std::optional<double>>& values) {
  Accumulator acc;
  double sum = 0.0;
  for (const auto& v : values) {
    if (v) {
      sum += *v;
      ++acc.count;
    }
  }
  if (acc.count == 0) {
    acc.mean = std::numeric_limits<double>::quiet_NaN();
    acc.stddev = std::numeric_limits<double>::quiet_NaN();
    return acc;
  }
  acc.mean = sum / acc.count;
  if (acc.count > 1) {
    double ss = 0.0;
    for (const auto& v : values) {
      if (v) ss += (*v - acc.mean) * (*v - acc.mean);
    }
    acc.stddev = std::sqrt(ss / (acc.count - 1));
  }
  return acc;
}

}  // namespace

ExperimentResult run_experiment(const Experiment& experiment,
                                const ExperimentConfig& config) {
  if (experiment.references.empty()) throw Error("experiment has no references");
  if (config.samplers.empty()) throw Error("no samplers configured");
  if (config.fractions.empty()) throw Error("no budget fractions configured");
  if (config.repetitions < 1) throw Error("repetitions must be at least 1");
  for (const std::string& name : config.samplers) {
    if (!is_sampler_name(name)) throw UsageError("unknown sampler '" + name + "'");
  }

  const int n_refs = static_cast<int>(experiment.references.size());
  const int n_samplers = static_cast<int>(config.samplers.size());
  const int n_fracs = static_cast<int>(config.fractions.size());
  const int reps = config.repetitions;

  // ground truth once per reference
  std::vector<QualityScores> gt(n_refs);
  for (int r = 0; r < n_refs; ++r) {
    gt[r] = ground_truth_scores(*experiment.references[r].oracle, config.scoring);
  }

  std::vector<TrialTask> tasks;
  tasks.reserve(static_cast<std::size_t>(n_refs) * n_samplers * n_fracs * reps);
  for (int r = 0; r < n_refs; ++r) {
    for (int s = 0; s < n_samplers; ++s) {
      for (int f = 0; f < n_fracs; ++f) {
        for (int rep = 0; rep < reps; ++rep) tasks.push_back({r, s, f, rep});
      }
    }
  }

  std::vector<TrialResult> trials(tasks.size());
  std::vector<std::string> failures(tasks.size());

  auto run_task = [&](std::size_t index) {
    const TrialTask& task = tasks[index];
    const Reference& ref = experiment.references[task.reference_index];
    const std::string& sampler_name = config.samplers[task.sampler_index];
    const double fraction = config.fractions[task.fraction_index];
    const std::uint64_t seed = derive_seed(config.master_seed, ref.id, sampler_name,
                                           fraction, task.repetition);
    try {
      Rng rng(seed);
      const std::unique_ptr<JudgmentOracle> oracle = ref.oracle->clone();
      const std::unique_ptr<Sampler> sampler =
          make_sampler(sampler_name, oracle->size(), config.sampler_options);
      const int budget =
          budget_from_fraction(fraction, oracle->size(), config.subjects);
      const TrialOutput out = run_trial(*oracle, *sampler, budget, config.scoring,
                                        config.init_value, rng);

      TrialResult result;
      result.sampler = sampler_name;
      result.reference = ref.id;
      result.fraction = fraction;
      result.repetition = task.repetition;
      result.judgments = budget;
      const std::vector<double>& truth = gt[task.reference_index].s;
      try {
        result.plcc = plcc(truth, out.scores.s);
      } catch (const UndefinedCorrelation&) {
        result.plcc = std::nullopt;
      }
      try {
        result.srocc = srocc(truth, out.scores.s);
      } catch (const UndefinedCorrelation&) {
        result.srocc = std::nullopt;
      }
      trials[index] = std::move(result);
    } catch (const std::exception& e) {
      failures[index] = "trial failed (reference=" + ref.id + ", sampler=" +
                        sampler_name + ", fraction=" + std::to_string(fraction) +
                        ", repetition=" + std::to_string(task.repetition) +
                        ", seed=" + std::to_string(seed) + "): " + e.what();
    }
  };

  int thread_count = config.threads > 0
                         ? config.threads
                         : static_cast<int>(std::thread::hardware_concurrency());
  thread_count = std::max(1, std::min<int>(thread_count, static_cast<int>(tasks.size())));

  if (thread_count == 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) run_task(i);
  } else {
    std::atomic<std::size_t> cursor{0};
    std::vector<std::thread> workers;
    workers.reserve(thread_count);
    for (int t = 0; t < thread_count; ++t) {
      workers.emplace_back([&] {
        for (;;) {
          const std::size_t i = cursor.fetch_add(1);
          if (i >= tasks.size()) return;
          run_task(i);
        }
      });
    }
    for (std::thread& w : workers) w.join();
  }

  for (const std::string& failure : failures) {
    if (!failure.empty()) throw Error(failure);
  }

  // mean/std over repetitions per reference, then averaged over references
  ExperimentResult result;
  result.trials = std::move(trials);
  for (int s = 0; s < n_samplers; ++s) {
    for (int f = 0; f < n_fracs; ++f) {
      AggregateRow row;
      row.sampler = config.samplers[s];
      row.fraction = config.fractions[f];
      row.repetitions = reps;
      row.references = n_refs;
      double plcc_mean = 0.0, plcc_std = 0.0, srocc_mean = 0.0, srocc_std = 0.0;
      for (int r = 0; r < n_refs; ++r) {
        std::vector<std::optional<double>> ps(reps), ss(reps);
        for (int rep = 0; rep < reps; ++rep) {
          const std::size_t index =
              ((static_cast<std::size_t>(r) * n_samplers + s) * n_fracs + f) * reps + rep;
          ps[rep] = result.trials[index].plcc;
          ss[rep] = result.trials[index].srocc;
        }
        const Accumulator pa = summarize(ps);
        const Accumulator sa = summarize(ss);
        plcc_mean += pa.mean;
        plcc_std += pa.stddev;
        srocc_mean += sa.mean;
        srocc_std += sa.stddev;
      }
      row.plcc_mean = plcc_mean / n_refs;
      row.plcc_std = plcc_std / n_refs;
      row.srocc_mean = srocc_mean / n_refs;
      row.srocc_std = srocc_std / n_refs;
      result.aggregate.push_back(row);
    }
  }
  return result;
}

}  // namespace pcbench
