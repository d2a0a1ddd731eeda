#include "pcbench/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pcbench/errors.hpp"
#include "pcbench/linalg.hpp"

namespace pcbench {

namespace {

constexpr double kLn2 = 0.6931471805599453;

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -(p * std::log(p) + (1.0 - p) * std::log(1.0 - p));
}

int pair_count(int n) { return n * (n - 1) / 2; }

Pair nth_pair(int n, int index) {
  for (int i = 0; i < n - 1; ++i) {
    const int row = n - 1 - i;
    if (index < row) return Pair(i, i + 1 + index);
    index -= row;
  }
  throw std::invalid_argument("pair index out of range");
}

// 9-node Gauss-Hermite rule computed once by Golub-Welsch and symmetrized.
struct GaussHermite {
  std::array<double, 9> nodes{};
  std::array<double, 9> weights{};  // normalized: weights sum to 1

  GaussHermite() {
    constexpr int m = 9;
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(m, m);
    for (int k = 1; k < m; ++k) {
      const double b = std::sqrt(k / 2.0);
      jacobi(k, k - 1) = b;
      jacobi(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
    for (int k = 0; k < m; ++k) {
      nodes[k] = es.eigenvalues()[k];
      const double v0 = es.eigenvectors()(0, k);
      weights[k] = v0 * v0;  // w_k / sqrt(pi)
    }
    // enforce exact +/- symmetry of the rule
    for (int k = 0; k < m / 2; ++k) {
      const int r = m - 1 - k;
      const double x = 0.5 * (nodes[r] - nodes[k]);
      nodes[k] = -x;
      nodes[r] = x;
      const double w = 0.5 * (weights[k] + weights[r]);
      weights[k] = w;
      weights[r] = w;
    }
    nodes[m / 2] = 0.0;
  }
};

const GaussHermite& gauss_hermite() {
  static const GaussHermite rule;
  return rule;
}

}  // namespace

bool is_sampler_name(std::string_view name) {
  return std::find(kSamplerNames.begin(), kSamplerNames.end(), name) !=
         kSamplerNames.end();
}

// --- hr-random --------------------------------------------------------------

std::vector<Pair> random_pairs(int n, int max_pairs, Rng& rng) {
  if (n < 2) throw InvalidDimension("need at least two stimuli");
  std::vector<Pair> out;
  out.reserve(max_pairs);
  const int total = pair_count(n);
  for (int k = 0; k < max_pairs; ++k) {
    out.push_back(nth_pair(n, static_cast<int>(rng.below(total))));
  }
  return out;
}

// --- swiss ------------------------------------------------------------------

std::vector<Pair> swiss_next_round(const std::vector<double>& standings,
                                   const std::set<Pair>& history, Rng& rng) {
  const int n = static_cast<int>(standings.size());
  if (n < 2) throw InvalidDimension("need at least two stimuli");

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);

  if (history.empty()) {
    // round one: uniformly random perfect matching
    rng.shuffle(order);
    std::vector<Pair> round;
    for (int k = 0; k + 1 < n; k += 2) round.emplace_back(order[k], order[k + 1]);
    return round;
  }

  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return standings[a] > standings[b]; });

  std::vector<char> paired(n, 0);
  std::vector<Pair> round;
  for (int pos = 0; pos < n; ++pos) {
    const int s = order[pos];
    if (paired[s]) continue;
    int partner = -1;
    for (int pos2 = pos + 1; pos2 < n; ++pos2) {
      const int t = order[pos2];
      if (paired[t]) continue;
      if (!history.contains(Pair(s, t))) {
        partner = t;
        break;
      }
    }
    if (partner < 0) {
      // every remaining partner was already played; repeat is forced
      for (int pos2 = pos + 1; pos2 < n; ++pos2) {
        if (!paired[order[pos2]]) {
          partner = order[pos2];
          break;
        }
      }
    }
    if (partner < 0) break;  // odd count: last stimulus sits the round out
    paired[s] = 1;
    paired[partner] = 1;
    round.emplace_back(s, partner);
  }
  return round;
}

// --- expected information gain ------------------------------------------------

double pair_eig(const GaussianPosterior& posterior, int i, int j) {
  const double mu_d = posterior.mu[i] - posterior.mu[j];
  double var_d =
      posterior.cov(i, i) + posterior.cov(j, j) - 2.0 * posterior.cov(i, j);
  if (var_d < -1e-9) {
    throw InvalidPosterior("negative variance for score difference");
  }
  var_d = std::max(var_d, 0.0);
  if (var_d == 0.0) return 0.0;  // outcome carries no information about d

  const GaussHermite& rule = gauss_hermite();
  const double spread = std::sqrt(2.0 * var_d);
  double mean_p = 0.0;
  double mean_entropy = 0.0;
  for (int k = 0; k < 9; ++k) {
    const double p = logistic(mu_d + spread * rule.nodes[k]);
    mean_p += rule.weights[k] * p;
    mean_entropy += rule.weights[k] * binary_entropy(p);
  }
  const double eig = binary_entropy(mean_p) - mean_entropy;
  return std::clamp(eig, 0.0, kLn2);
}

EigTable build_eig_table(const GaussianPosterior& posterior) {
  const int n = static_cast<int>(posterior.mu.size());
  EigTable table = EigTable::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double u = pair_eig(posterior, i, j);
      table(i, j) = u;
      table(j, i) = u;
    }
  }
  return table;
}

std::vector<Pair> max_utility_spanning_tree(const EigTable& table) {
  const int n = static_cast<int>(table.rows());
  struct Edge {
    double utility;
    int a, b;
  };
  std::vector<Edge> edges;
  edges.reserve(pair_count(n));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) edges.push_back({table(i, j), i, j});
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) {
    if (x.utility != y.utility) return x.utility > y.utility;
    if (x.a != y.a) return x.a < y.a;
    return x.b < y.b;
  });

  // Kruskal with union-find; edges come out in decreasing utility order
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };

  std::vector<Pair> tree;
  tree.reserve(n - 1);
  for (const Edge& e : edges) {
    const int ra = find(e.a), rb = find(e.b);
    if (ra == rb) continue;
    parent[ra] = rb;
    tree.emplace_back(e.a, e.b);
    if (static_cast<int>(tree.size()) == n - 1) break;
  }
  return tree;
}

// --- hybrid-mst ---------------------------------------------------------------

std::vector<Pair> hybrid_mst_next_batch(const PCMatrix& pcm, int max_pairs,
                                        double prior_var) {
  const GaussianPosterior posterior = laplace_posterior(pcm, prior_var);
  std::vector<Pair> tree = max_utility_spanning_tree(build_eig_table(posterior));
  if (static_cast<int>(tree.size()) > max_pairs) {
    tree.erase(tree.begin() + max_pairs, tree.end());
  }
  return tree;
}

// --- asap -----------------------------------------------------------------------

std::vector<Pair> asap_next_batch(const PCMatrix& pcm, int max_pairs,
                                  const std::vector<Pair>& previous_batch,
                                  double prior_var, int window) {
  const int n = pcm.size();
  if (window <= 0) window = (n + 3) / 4;
  const GaussianPosterior posterior = laplace_posterior(pcm, prior_var);

  // rank positions under the posterior mean, ties by index
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return posterior.mu[a] > posterior.mu[b];
  });
  std::vector<int> rank(n);
  for (int pos = 0; pos < n; ++pos) rank[order[pos]] = pos;

  std::set<Pair> candidates;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (std::abs(rank[i] - rank[j]) <= window) candidates.insert(Pair(i, j));
    }
  }
  candidates.insert(previous_batch.begin(), previous_batch.end());

  struct Scored {
    double utility;
    Pair pair;
  };
  std::vector<Scored> scored;
  scored.reserve(candidates.size());
  for (const Pair& p : candidates) {
    scored.push_back({pair_eig(posterior, p.a, p.b), p});
  }
  std::sort(scored.begin(), scored.end(), [](const Scored& x, const Scored& y) {
    if (x.utility != y.utility) return x.utility > y.utility;
    return x.pair < y.pair;
  });

  const int take = std::min<int>(max_pairs, static_cast<int>(scored.size()));
  std::vector<Pair> batch;
  batch.reserve(take);
  for (int k = 0; k < take; ++k) batch.push_back(scored[k].pair);
  return batch;
}

// --- hr-active --------------------------------------------------------------------

std::vector<Pair> hr_active_next(const PCMatrix& pcm, int max_pairs) {
  const int n = pcm.size();
  if (!comparison_graph_connected(pcm)) {
    throw IllPosed("comparison graph is disconnected");
  }
  const Eigen::MatrixXd lap_pinv = pseudo_inverse_psd(comparison_laplacian(pcm));

  struct Scored {
    double gain;
    Pair pair;
  };
  std::vector<Scored> scored;
  scored.reserve(pair_count(n));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double resistance = effective_resistance(lap_pinv, i, j);
      scored.push_back({std::log1p(resistance), Pair(i, j)});
    }
  }
  std::sort(scored.begin(), scored.end(), [](const Scored& x, const Scored& y) {
    if (x.gain != y.gain) return x.gain > y.gain;
    return x.pair < y.pair;
  });

  const int take = std::min<int>(max_pairs, static_cast<int>(scored.size()));
  std::vector<Pair> batch;
  batch.reserve(take);
  for (int k = 0; k < take; ++k) batch.push_back(scored[k].pair);
  return batch;
}

// --- crowd-bt ----------------------------------------------------------------------

namespace {

constexpr double kVarFloor = 1e-6;

double digamma(double x) {
  double acc = 0.0;
  while (x < 6.0) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  const double inv2 = 1.0 / (x * x);
  return acc + std::log(x) - 0.5 / x -
         inv2 * (1.0 / 12 - inv2 * (1.0 / 120 - inv2 * (1.0 / 252 - inv2 * (1.0 / 240))));
}

double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

double kl_gaussian(double mu1, double var1, double mu0, double var0) {
  return 0.5 * (var1 / var0 + (mu1 - mu0) * (mu1 - mu0) / var0 - 1.0 +
                std::log(var0 / var1));
}

double kl_beta(double a1, double b1, double a0, double b0) {
  return log_beta(a0, b0) - log_beta(a1, b1) + (a1 - a0) * digamma(a1) +
         (b1 - b0) * digamma(b1) + (a0 - a1 + b0 - b1) * digamma(a1 + b1);
}

struct CrowdBtUpdate {
  double mu_w, var_w;  // winner belief after the observation
  double mu_l, var_l;  // loser belief
  double alpha, beta;  // annotator belief
};

// Shared by the real update and the hypothetical-outcome utility scan.
CrowdBtUpdate crowd_bt_update(const CrowdBtState& s, int w, int l) {
  const double eta = s.alpha / (s.alpha + s.beta);
  const double t = logistic(s.mu[w] - s.mu[l]);
  const double prob = eta * t + (1.0 - eta) * (1.0 - t);

  // first and second derivatives of log prob w.r.t. the winner mean
  const double tp = t * (1.0 - t);
  const double grad = (2.0 * eta - 1.0) * tp / prob;
  const double curv = (2.0 * eta - 1.0) * tp * (1.0 - 2.0 * t) / prob - grad * grad;

  CrowdBtUpdate u;
  u.mu_w = s.mu[w] + s.var[w] * grad;
  u.mu_l = s.mu[l] - s.var[l] * grad;
  u.var_w = std::max(s.var[w] * (1.0 + s.var[w] * curv), kVarFloor);
  u.var_l = std::max(s.var[l] * (1.0 + s.var[l] * curv), kVarFloor);

  // annotator posterior is a Beta mixture; match first two moments
  const double denom = t * s.alpha + (1.0 - t) * s.beta;
  const double w1 = t * s.alpha / denom;
  const double w2 = 1.0 - w1;
  const double ab1 = s.alpha + s.beta + 1.0;
  const double ab2 = s.alpha + s.beta + 2.0;
  const double m1 =
      w1 * (s.alpha + 1.0) / ab1 + w2 * s.alpha / ab1;
  const double m2 = w1 * (s.alpha + 1.0) * (s.alpha + 2.0) / (ab1 * ab2) +
                    w2 * s.alpha * (s.alpha + 1.0) / (ab1 * ab2);
  const double var = m2 - m1 * m1;
  if (var > 1e-12 && m1 > 0.0 && m1 < 1.0) {
    const double k = m1 * (1.0 - m1) / var - 1.0;
    u.alpha = std::max(m1 * k, 1e-3);
    u.beta = std::max((1.0 - m1) * k, 1e-3);
  } else {
    u.alpha = s.alpha;
    u.beta = s.beta;
  }
  return u;
}

}  // namespace

CrowdBtState crowd_bt_init(int n, const SamplerOptions& options) {
  if (n < 2) throw InvalidDimension("need at least two stimuli");
  CrowdBtState state;
  state.mu.assign(n, options.crowd_mu0);
  state.var.assign(n, options.crowd_var0);
  state.alpha = options.crowd_alpha;
  state.beta = options.crowd_beta;
  state.epsilon = options.crowd_epsilon;
  return state;
}

double crowd_bt_outcome_prob(const CrowdBtState& state, int winner, int loser) {
  const double eta = state.alpha / (state.alpha + state.beta);
  const double t = logistic(state.mu[winner] - state.mu[loser]);
  return eta * t + (1.0 - eta) * (1.0 - t);
}

Pair crowd_bt_next(const CrowdBtState& state, Rng& rng) {
  const int n = static_cast<int>(state.mu.size());
  if (rng.bernoulli(state.epsilon)) {
    return nth_pair(n, static_cast<int>(rng.below(pair_count(n))));
  }

  double best_utility = -1.0;
  int best_index = 0;
  for (int idx = 0; idx < pair_count(n); ++idx) {
    const Pair p = nth_pair(n, idx);
    double utility = 0.0;
    for (const bool a_wins : {true, false}) {
      const int w = a_wins ? p.a : p.b;
      const int l = a_wins ? p.b : p.a;
      const double prob = crowd_bt_outcome_prob(state, w, l);
      const CrowdBtUpdate u = crowd_bt_update(state, w, l);
      utility += prob * (kl_gaussian(u.mu_w, u.var_w, state.mu[w], state.var[w]) +
                         kl_gaussian(u.mu_l, u.var_l, state.mu[l], state.var[l]) +
                         kl_beta(u.alpha, u.beta, state.alpha, state.beta));
    }
    if (utility > best_utility) {
      best_utility = utility;
      best_index = idx;
    }
  }
  return nth_pair(n, best_index);
}

void crowd_bt_observe(CrowdBtState& state, const Judgment& j) {
  const CrowdBtUpdate u = crowd_bt_update(state, j.winner, j.loser);
  state.mu[j.winner] = u.mu_w;
  state.var[j.winner] = u.var_w;
  state.mu[j.loser] = u.mu_l;
  state.var[j.loser] = u.var_l;
  state.alpha = u.alpha;
  state.beta = u.beta;
}

// --- harness adapters ----------------------------------------------------------

namespace {

class RandomSampler final : public Sampler {
 public:
  explicit RandomSampler(int n) : n_(n) {}
  std::string_view name() const override { return "hr-random"; }
  std::vector<Pair> next_batch(const PCMatrix&, int, Rng& rng) override {
    return random_pairs(n_, 1, rng);
  }

 private:
  int n_;
};

class SwissSampler final : public Sampler {
 public:
  explicit SwissSampler(int n) : n_(n), wins_(n, 0.0) {}
  std::string_view name() const override { return "swiss"; }

  std::vector<Pair> next_batch(const PCMatrix&, int max_pairs, Rng& rng) override {
    std::vector<Pair> round = swiss_next_round(wins_, history_, rng);
    if (static_cast<int>(round.size()) > max_pairs) {
      round.erase(round.begin() + max_pairs, round.end());
    }
    // only pairs actually handed to the harness count as played
    history_.insert(round.begin(), round.end());
    return round;
  }

  void observe(const Judgment& j) override { wins_[j.winner] += 1.0; }

 private:
  int n_;
  std::vector<double> wins_;
  std::set<Pair> history_;
};

class CrowdBtSampler final : public Sampler {
 public:
  CrowdBtSampler(int n, const SamplerOptions& options)
      : state_(crowd_bt_init(n, options)) {}
  std::string_view name() const override { return "crowd-bt"; }
  std::vector<Pair> next_batch(const PCMatrix&, int, Rng& rng) override {
    return {crowd_bt_next(state_, rng)};
  }
  void observe(const Judgment& j) override { crowd_bt_observe(state_, j); }

 private:
  CrowdBtState state_;
};

class HrActiveSampler final : public Sampler {
 public:
  std::string_view name() const override { return "hr-active"; }
  std::vector<Pair> next_batch(const PCMatrix& pcm, int, Rng&) override {
    return hr_active_next(pcm, 1);
  }
};

class HybridMstSampler final : public Sampler {
 public:
  explicit HybridMstSampler(double prior_var) : prior_var_(prior_var) {}
  std::string_view name() const override { return "hybrid-mst"; }
  std::vector<Pair> next_batch(const PCMatrix& pcm, int max_pairs, Rng&) override {
    return hybrid_mst_next_batch(pcm, max_pairs, prior_var_);
  }

 private:
  double prior_var_;
};

class AsapSampler final : public Sampler {
 public:
  AsapSampler(double prior_var, int window)
      : prior_var_(prior_var), window_(window) {}
  std::string_view name() const override { return "asap"; }
  std::vector<Pair> next_batch(const PCMatrix& pcm, int max_pairs, Rng&) override {
    const int batch = std::min(max_pairs, pcm.size() - 1);
    previous_ = asap_next_batch(pcm, batch, previous_, prior_var_, window_);
    return previous_;
  }

 private:
  double prior_var_;
  int window_;
  std::vector<Pair> previous_;
};

}  // namespace

std::unique_ptr<Sampler> make_sampler(std::string_view name, int n,
                                      const SamplerOptions& options) {
  if (n < 2) throw InvalidDimension("need at least two stimuli");
  if (name == "hr-random") return std::make_unique<RandomSampler>(n);
  if (name == "swiss") return std::make_unique<SwissSampler>(n);
  if (name == "crowd-bt") return std::make_unique<CrowdBtSampler>(n, options);
  if (name == "hr-active") return std::make_unique<HrActiveSampler>();
  if (name == "hybrid-mst") return std::make_unique<HybridMstSampler>(options.prior_var);
  if (name == "asap") return std::make_unique<AsapSampler>(options.prior_var, options.asap_window);
  throw UsageError("unknown sampler '" + std::string(name) + "'");
}

}  // namespace pcbench
