#pragma once

#include <memory>
#include <vector>

#include "pcbench/pcm.hpp"
#include "pcbench/rng.hpp"
#include "pcbench/scaling.hpp"

namespace pcbench {

// Source of simulated subject decisions. Oracles are cloned per trial so that
// stateful modes (vote pools) never share mutation across threads.
class JudgmentOracle {
 public:
  virtual ~JudgmentOracle() = default;

  virtual int size() const = 0;

  // One simulated subject decision on the requested pair.
  virtual Judgment judge(const Pair& p, Rng& rng) = 0;

  // Complete-design matrix the ground-truth scores are fitted on.
  virtual PCMatrix ground_truth_pcm() const = 0;

  virtual std::unique_ptr<JudgmentOracle> clone() const = 0;
};

enum class EmpiricalMode { kWithReplacement, kWithoutReplacement };

// Replays a complete-design dataset. With replacement, each judgment is a
// Bernoulli draw on the recorded win rate; without replacement, recorded
// votes are consumed one by one.
class EmpiricalOracle final : public JudgmentOracle {
 public:
  // The matrix must be a complete design: every pair has at least one vote.
  explicit EmpiricalOracle(PCMatrix ground_truth,
                           EmpiricalMode mode = EmpiricalMode::kWithReplacement);

  int size() const override { return gt_.size(); }
  Judgment judge(const Pair& p, Rng& rng) override;
  PCMatrix ground_truth_pcm() const override { return gt_; }
  std::unique_ptr<JudgmentOracle> clone() const override;

  EmpiricalMode mode() const { return mode_; }
  // Remaining votes on a pair (without-replacement bookkeeping).
  double remaining(const Pair& p) const;

 private:
  PCMatrix gt_;
  EmpiricalMode mode_;
  std::vector<double> pool_;  // remaining directed votes, row-major
};

enum class SyntheticGroundTruth { kAnalytic, kSimulated };

// Synthetic subject model: stimulus quality is N(mu_i, sigma_i^2) on the
// MOS scale, a judgment compares two fresh opinion draws, and the outcome is
// inverted with flip_prob to emulate unreliable crowdsourcing votes.
class SyntheticOracle final : public JudgmentOracle {
 public:
  SyntheticOracle(std::vector<double> mu, std::vector<double> sigma,
                  double flip_prob = 0.1, int subjects = 15);

  int size() const override { return static_cast<int>(mu_.size()); }
  Judgment judge(const Pair& p, Rng& rng) override;

  // Closed-form probability that i is preferred over j, flip included:
  //   (1 - flip) * Phi((mu_i - mu_j) / sqrt(sigma_i^2 + sigma_j^2)) + flip * ...
  double expected_preference(int i, int j) const;

  // Analytic mode: deterministic expected count matrix,
  // subjects * expected_preference per ordered cell. Simulated mode: one
  // seeded complete-design test with `subjects` passes.
  PCMatrix ground_truth_pcm() const override;
  std::unique_ptr<JudgmentOracle> clone() const override;

  void set_ground_truth_mode(SyntheticGroundTruth mode, std::uint64_t sim_seed = 0);

  const std::vector<double>& mu() const { return mu_; }
  const std::vector<double>& sigma() const { return sigma_; }
  double flip_prob() const { return flip_prob_; }
  int subjects() const { return subjects_; }

 private:
  std::vector<double> mu_;
  std::vector<double> sigma_;
  double flip_prob_;
  int subjects_;
  SyntheticGroundTruth gt_mode_ = SyntheticGroundTruth::kAnalytic;
  std::uint64_t sim_seed_ = 0;
};

// Draws the synthetic stimulus population: mu_i ~ U(1, 5), sigma_i ~ U(0, 0.7),
// flip probability 0.1, 15 subjects.
SyntheticOracle synth_generate(int n, Rng& rng);

// Scores of the oracle's complete-design matrix under the chosen backend.
QualityScores ground_truth_scores(const JudgmentOracle& oracle, ScoringBackend backend);

}  // namespace pcbench
