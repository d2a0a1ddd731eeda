#pragma once

#include <Eigen/Dense>
#include <vector>

#include "pcbench/pcm.hpp"

namespace pcbench {

// Latent quality scores, anchored to zero mean. BT scores are log-strengths,
// HodgeRank scores are linear flow potentials.
struct QualityScores {
  std::vector<double> s;
  int iterations = 0;
  double residual = 0.0;
  bool converged = true;
};

// Gaussian approximation of the score posterior: mean and covariance, both
// anchored to the zero-sum subspace.
struct GaussianPosterior {
  Eigen::VectorXd mu;
  Eigen::MatrixXd cov;
};

enum class ScoringBackend { kBt, kHodgeRank };

// Bradley-Terry maximum likelihood scores via minorization-maximization:
//   pi_i <- W_i / sum_j n_ij / (pi_i + pi_j)
// iterated until the largest log-strength change drops below tol. Requires a
// connected comparison graph with every stimulus holding at least one win
// and one loss (always true under ones-initialization); otherwise IllPosed.
// Non-convergence is reported through the converged flag and residual.
QualityScores fit_bt(const PCMatrix& pcm, double tol = 1e-9, int max_iter = 10000);

// Pairwise flow fed into the HodgeRank least squares. The normalized count
// difference (range [-1, 1]) is the default; log-odds is available for
// matrices whose odds are already bounded away from zero.
enum class HodgeFlow { kNormalizedDifference, kLogOdds };

// HodgeRank: weighted least-squares fit of score differences to the
// preference flow (default y_ij = (c_ij - c_ji) / n_ij) with weights n_ij,
// solved through the Laplacian pseudo-inverse on the zero-sum subspace.
QualityScores fit_hodgerank(const PCMatrix& pcm,
                            HodgeFlow flow = HodgeFlow::kNormalizedDifference);

// Dispatch on the configured backend.
QualityScores fit_scores(const PCMatrix& pcm, ScoringBackend backend);

// Laplace approximation of the BT score posterior under independent
// N(0, prior_var) priors: Newton ascent to the MAP, covariance from the
// inverted negative log-posterior Hessian, then zero-mean anchoring (the
// covariance is projected onto the zero-sum subspace).
GaussianPosterior laplace_posterior(const PCMatrix& pcm, double prior_var = 1.0);

// Log of the unnormalized BT posterior density at scores s. Exposed so the
// Hessian can be validated against finite differences.
double bt_log_posterior(const PCMatrix& pcm, const Eigen::VectorXd& s, double prior_var);

// Hessian of bt_log_posterior at s (negative definite for prior_var > 0).
Eigen::MatrixXd bt_posterior_hessian(const PCMatrix& pcm, const Eigen::VectorXd& s,
                                     double prior_var);

}  // namespace pcbench
