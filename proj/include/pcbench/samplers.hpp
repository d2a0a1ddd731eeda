#pragma once

#include <Eigen/Dense>
#include <array>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "pcbench/pcm.hpp"
#include "pcbench/rng.hpp"
#include "pcbench/scaling.hpp"

namespace pcbench {

// Canonical sampler names accepted by the CLI and written to the CSV.
inline constexpr std::array<std::string_view, 6> kSamplerNames = {
    "hr-random", "swiss", "crowd-bt", "hr-active", "hybrid-mst", "asap"};

bool is_sampler_name(std::string_view name);

struct SamplerOptions {
  double prior_var = 1.0;     // Gaussian prior variance of the score posterior
  int asap_window = 0;        // 0 picks ceil(n / 4)
  double crowd_mu0 = 0.0;     // Crowd-BT item belief prior
  double crowd_var0 = 1.0;
  double crowd_alpha = 10.0;  // Crowd-BT annotator reliability Beta prior
  double crowd_beta = 1.0;
  // Exploration rate. Pure greedy KL selection fixates on near-tied pairs
  // (one pair can swallow ~10% of a large budget while most pairs starve),
  // which caps full-budget accuracy; 0.35 restores coverage.
  double crowd_epsilon = 0.35;
};

// Common contract for the benchmarked pair-selection strategies. A sampler
// instance is single-threaded; run one instance per trial.
class Sampler {
 public:
  virtual ~Sampler() = default;

  virtual std::string_view name() const = 0;

  // Next pair or batch. The returned list holds between 1 and max_pairs
  // pairs and is deterministic given (state, pcm, rng state).
  virtual std::vector<Pair> next_batch(const PCMatrix& pcm, int max_pairs, Rng& rng) = 0;

  // Outcome feedback for samplers with online state. Default: ignore.
  virtual void observe(const Judgment&) {}
};

std::unique_ptr<Sampler> make_sampler(std::string_view name, int n,
                                      const SamplerOptions& options = {});

// --- hr-random ------------------------------------------------------------

// Uniform draws over the n(n-1)/2 unordered pairs, with replacement.
std::vector<Pair> random_pairs(int n, int max_pairs, Rng& rng);

// --- swiss ----------------------------------------------------------------

// One Swiss tournament round. With no history yet, a uniformly random
// perfect matching; afterwards stimuli are sorted by standing (descending,
// ties by index) and paired greedily with the nearest unplayed partner
// below them, repeating a pairing only when every partner was played.
std::vector<Pair> swiss_next_round(const std::vector<double>& standings,
                                   const std::set<Pair>& history, Rng& rng);

// --- expected information gain --------------------------------------------

// Mutual information (nats) between the binary outcome of comparing (i, j)
// and the score difference d = s_i - s_j under the posterior, with logistic
// outcome probability. Expectations use 9-node Gauss-Hermite quadrature.
double pair_eig(const GaussianPosterior& posterior, int i, int j);

// Symmetric utility table of pair_eig values, zero diagonal.
using EigTable = Eigen::MatrixXd;
EigTable build_eig_table(const GaussianPosterior& posterior);

// Spanning tree maximizing total utility, edges ordered by decreasing
// utility; ties broken lexicographically.
std::vector<Pair> max_utility_spanning_tree(const EigTable& table);

// --- hybrid-mst -----------------------------------------------------------

// Refit the posterior, build the EIG table, and emit the best-utility
// spanning tree truncated to max_pairs.
std::vector<Pair> hybrid_mst_next_batch(const PCMatrix& pcm, int max_pairs,
                                        double prior_var = 1.0);

// --- asap -----------------------------------------------------------------

// Refit the posterior on the full comparison set, restrict candidates to
// pairs within `window` positions in the posterior-mean ranking (union the
// previous batch), and emit the top max_pairs candidates by EIG.
std::vector<Pair> asap_next_batch(const PCMatrix& pcm, int max_pairs,
                                  const std::vector<Pair>& previous_batch,
                                  double prior_var = 1.0, int window = 0);

// --- hr-active ------------------------------------------------------------

// Gain log(1 + r_ij) with r_ij the effective resistance of edge (i, j) in
// the vote-count graph; emits the max_pairs highest-gain edges.
std::vector<Pair> hr_active_next(const PCMatrix& pcm, int max_pairs);

// --- crowd-bt -------------------------------------------------------------

struct CrowdBtState {
  std::vector<double> mu;   // per-stimulus Gaussian belief means
  std::vector<double> var;  // per-stimulus Gaussian belief variances
  double alpha;             // annotator reliability Beta parameters
  double beta;
  double epsilon;           // exploration rate
};

CrowdBtState crowd_bt_init(int n, const SamplerOptions& options = {});

// Epsilon-greedy: a uniform pair with probability epsilon, otherwise the
// pair with the largest expected KL gain over both outcomes.
Pair crowd_bt_next(const CrowdBtState& state, Rng& rng);

// Online update: gradient step on the item means, multiplicative variance
// update floored at 1e-6, annotator Beta refreshed by moment matching.
void crowd_bt_observe(CrowdBtState& state, const Judgment& j);

// Outcome probability under the reliability mixture.
double crowd_bt_outcome_prob(const CrowdBtState& state, int winner, int loser);

}  // namespace pcbench
