#include "pcbench/oracle.hpp"

#include <cmath>
#include <string>

#include "pcbench/errors.hpp"

namespace pcbench {

namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace

EmpiricalOracle::EmpiricalOracle(PCMatrix ground_truth, EmpiricalMode mode)
    : gt_(std::move(ground_truth)), mode_(mode) {
  const int n = gt_.size();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (gt_.pair_total(i, j) <= 0.0) {
        throw DatasetError("incomplete design: no votes on pair (" +
                           std::to_string(i) + ", " + std::to_string(j) + ")");
      }
    }
  }
  pool_.resize(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j) pool_[static_cast<std::size_t>(i) * n + j] = gt_.at(i, j);
    }
  }
}

Judgment EmpiricalOracle::judge(const Pair& p, Rng& rng) {
  if (mode_ == EmpiricalMode::kWithReplacement) {
    const double prob_a = gt_.preference_probability(p.a, p.b);
    return rng.bernoulli(prob_a) ? Judgment(p.a, p.b) : Judgment(p.b, p.a);
  }
  const int n = gt_.size();
  double& forward = pool_[static_cast<std::size_t>(p.a) * n + p.b];
  double& backward = pool_[static_cast<std::size_t>(p.b) * n + p.a];
  const double total = forward + backward;
  if (total <= 0.0) {
    throw PoolExhausted("no votes left on pair (" + std::to_string(p.a) + ", " +
                        std::to_string(p.b) + ")");
  }
  if (rng.uniform() * total < forward) {
    forward -= 1.0;
    return Judgment(p.a, p.b);
  }
  backward -= 1.0;
  return Judgment(p.b, p.a);
}

double EmpiricalOracle::remaining(const Pair& p) const {
  const int n = gt_.size();
  return pool_[static_cast<std::size_t>(p.a) * n + p.b] +
         pool_[static_cast<std::size_t>(p.b) * n + p.a];
}

std::unique_ptr<JudgmentOracle> EmpiricalOracle::clone() const {
  return std::make_unique<EmpiricalOracle>(gt_, mode_);
}

SyntheticOracle::SyntheticOracle(std::vector<double> mu, std::vector<double> sigma,
                                 double flip_prob, int subjects)
    : mu_(std::move(mu)), sigma_(std::move(sigma)), flip_prob_(flip_prob),
      subjects_(subjects) {
  if (mu_.size() != sigma_.size()) {
    throw DatasetError("mu and sigma vectors must have the same length");
  }
  if (mu_.size() < 2) throw InvalidDimension("synthetic oracle needs n >= 2");
  if (!(flip_prob_ >= 0.0 && flip_prob_ < 1.0)) {
    throw DatasetError("flip probability must lie in [0, 1)");
  }
  if (subjects_ < 1) throw DatasetError("subjects must be at least 1");
  for (const double s : sigma_) {
    if (!(s >= 0.0)) throw DatasetError("sigma entries must be nonnegative");
  }
}

Judgment SyntheticOracle::judge(const Pair& p, Rng& rng) {
  const double score_a = rng.normal(mu_[p.a], sigma_[p.a]);
  const double score_b = rng.normal(mu_[p.b], sigma_[p.b]);
  int winner, loser;
  if (score_a == score_b) {
    // exact tie only when both sigmas are zero and the means coincide
    winner = rng.bernoulli(0.5) ? p.a : p.b;
  } else {
    winner = score_a > score_b ? p.a : p.b;
  }
  loser = winner == p.a ? p.b : p.a;
  if (rng.bernoulli(flip_prob_)) std::swap(winner, loser);
  return Judgment(winner, loser);
}

double SyntheticOracle::expected_preference(int i, int j) const {
  const double var = sigma_[i] * sigma_[i] + sigma_[j] * sigma_[j];
  double p;
  if (var <= 0.0) {
    p = mu_[i] > mu_[j] ? 1.0 : (mu_[i] < mu_[j] ? 0.0 : 0.5);
  } else {
    p = normal_cdf((mu_[i] - mu_[j]) / std::sqrt(var));
  }
  return (1.0 - flip_prob_) * p + flip_prob_ * (1.0 - p);
}

PCMatrix SyntheticOracle::ground_truth_pcm() const {
  const int n = size();
  PCMatrix gt(n, 0.0);
  if (gt_mode_ == SyntheticGroundTruth::kAnalytic) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i != j) gt.set(i, j, subjects_ * expected_preference(i, j));
      }
    }
    return gt;
  }
  // one full complete-design pass per subject, seeded independently of trials
  Rng rng(sim_seed_);
  SyntheticOracle sampler = *this;
  for (int subject = 0; subject < subjects_; ++subject) {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        gt.record(sampler.judge(Pair(i, j), rng));
      }
    }
  }
  return gt;
}

std::unique_ptr<JudgmentOracle> SyntheticOracle::clone() const {
  return std::make_unique<SyntheticOracle>(*this);
}

void SyntheticOracle::set_ground_truth_mode(SyntheticGroundTruth mode,
                                            std::uint64_t sim_seed) {
  gt_mode_ = mode;
  sim_seed_ = sim_seed;
}

SyntheticOracle synth_generate(int n, Rng& rng) {
  if (n < 2) throw InvalidDimension("synthetic dataset needs n >= 2");
  std::vector<double> mu(n), sigma(n);
  for (int i = 0; i < n; ++i) mu[i] = rng.uniform(1.0, 5.0);
  for (int i = 0; i < n; ++i) sigma[i] = rng.uniform(0.0, 0.7);
  return SyntheticOracle(std::move(mu), std::move(sigma), 0.1, 15);
}

QualityScores ground_truth_scores(const JudgmentOracle& oracle, ScoringBackend backend) {
  return fit_scores(oracle.ground_truth_pcm(), backend);
}

}  // namespace pcbench
