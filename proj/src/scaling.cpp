#include "pcbench/scaling.hpp"

#include <cmath>
#include <string>

#include "pcbench/errors.hpp"
#include "pcbench/linalg.hpp"

namespace pcbench {

namespace {

constexpr double kPinvTol = 1e-10;

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

void require_connected(const PCMatrix& pcm) {
  if (!comparison_graph_connected(pcm)) {
    throw IllPosed("comparison graph is disconnected");
  }
}

void subtract_mean(std::vector<double>& v) {
  double mean = 0.0;
  for (const double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  for (double& x : v) x -= mean;
}

}  // namespace

QualityScores fit_bt(const PCMatrix& pcm, double tol, int max_iter) {
  const int n = pcm.size();
  require_connected(pcm);
  for (int i = 0; i < n; ++i) {
    if (pcm.wins(i) <= 0.0 || pcm.losses(i) <= 0.0) {
      throw IllPosed("stimulus " + std::to_string(i) +
                     " has no wins or no losses; BT strengths diverge");
    }
  }

  std::vector<double> pi(n, 1.0);
  std::vector<double> next(n, 1.0);
  double residual = 0.0;
  int iter = 0;
  for (; iter < max_iter; ++iter) {
    for (int i = 0; i < n; ++i) {
      double denom = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        const double nij = pcm.pair_total(i, j);
        if (nij > 0.0) denom += nij / (pi[i] + pi[j]);
      }
      next[i] = pcm.wins(i) / denom;
    }
    // renormalize to geometric mean one so strengths cannot drift
    double log_mean = 0.0;
    for (const double p : next) log_mean += std::log(p);
    log_mean /= n;
    const double scale = std::exp(-log_mean);
    residual = 0.0;
    for (int i = 0; i < n; ++i) {
      next[i] *= scale;
      residual = std::max(residual, std::abs(std::log(next[i]) - std::log(pi[i])));
    }
    pi.swap(next);
    if (residual < tol) {
      ++iter;
      break;
    }
  }

  QualityScores out;
  out.s.resize(n);
  for (int i = 0; i < n; ++i) out.s[i] = std::log(pi[i]);
  subtract_mean(out.s);
  out.iterations = iter;
  out.residual = residual;
  out.converged = residual < tol;
  return out;
}

QualityScores fit_hodgerank(const PCMatrix& pcm, HodgeFlow flow) {
  const int n = pcm.size();
  require_connected(pcm);

  const Eigen::MatrixXd lap = comparison_laplacian(pcm);
  Eigen::VectorXd divergence = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double nij = pcm.pair_total(i, j);
      if (nij <= 0.0) continue;
      double y;
      if (flow == HodgeFlow::kNormalizedDifference) {
        y = (pcm.at(i, j) - pcm.at(j, i)) / nij;
      } else {
        if (pcm.at(i, j) <= 0.0 || pcm.at(j, i) <= 0.0) {
          throw IllPosed("log-odds flow needs positive counts in both directions");
        }
        y = std::log(pcm.at(i, j) / pcm.at(j, i));
      }
      divergence[i] += nij * y;
    }
  }

  const Eigen::VectorXd s = pseudo_inverse_psd(lap, kPinvTol) * divergence;

  QualityScores out;
  out.s.assign(s.data(), s.data() + n);
  subtract_mean(out.s);
  out.iterations = 1;
  out.residual = (lap * s - divergence).cwiseAbs().maxCoeff();
  return out;
}

QualityScores fit_scores(const PCMatrix& pcm, ScoringBackend backend) {
  return backend == ScoringBackend::kBt ? fit_bt(pcm) : fit_hodgerank(pcm);
}

double bt_log_posterior(const PCMatrix& pcm, const Eigen::VectorXd& s, double prior_var) {
  const int n = pcm.size();
  double ll = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double c = pcm.at(i, j);
      if (c > 0.0) {
        // log sigma(s_i - s_j) written as -log1p(exp(-(s_i - s_j)))
        const double d = s[i] - s[j];
        ll += c * (d > 0.0 ? -std::log1p(std::exp(-d)) : d - std::log1p(std::exp(d)));
      }
    }
    ll -= s[i] * s[i] / (2.0 * prior_var);
  }
  return ll;
}

Eigen::MatrixXd bt_posterior_hessian(const PCMatrix& pcm, const Eigen::VectorXd& s,
                                     double prior_var) {
  const int n = pcm.size();
  Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double nij = pcm.pair_total(i, j);
      if (nij <= 0.0) continue;
      const double p = logistic(s[i] - s[j]);
      const double w = nij * p * (1.0 - p);
      hess(i, j) += w;
      hess(i, i) -= w;
    }
    hess(i, i) -= 1.0 / prior_var;
  }
  return hess;
}

GaussianPosterior laplace_posterior(const PCMatrix& pcm, double prior_var) {
  if (!(prior_var > 0.0)) throw IllPosed("prior variance must be positive");
  const int n = pcm.size();

  Eigen::VectorXd s = Eigen::VectorXd::Zero(n);
  constexpr double kTol = 1e-8;
  constexpr int kMaxIter = 200;
  for (int iter = 0; iter < kMaxIter; ++iter) {
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        // d/ds_i of c_ij log sigma(s_i - s_j) is c_ij sigma(s_j - s_i)
        grad[i] += pcm.at(i, j) * logistic(s[j] - s[i]);
        grad[i] -= pcm.at(j, i) * logistic(s[i] - s[j]);
      }
      grad[i] -= s[i] / prior_var;
    }
    const Eigen::MatrixXd hess = bt_posterior_hessian(pcm, s, prior_var);
    const Eigen::VectorXd step = hess.ldlt().solve(-grad);
    if (!step.allFinite()) {
      throw IllPosed("posterior Hessian is not invertible");
    }
    // step halving keeps the ascent monotone for extreme count matrices
    const double base = bt_log_posterior(pcm, s, prior_var);
    double scale = 1.0;
    Eigen::VectorXd candidate = s + step;
    while (bt_log_posterior(pcm, candidate, prior_var) < base && scale > 1e-6) {
      scale *= 0.5;
      candidate = s + scale * step;
    }
    s = candidate;
    if ((scale * step).cwiseAbs().maxCoeff() < kTol) break;
  }

  const Eigen::MatrixXd precision = -bt_posterior_hessian(pcm, s, prior_var);
  const Eigen::MatrixXd cov = precision.inverse();
  if (!cov.allFinite()) {
    throw IllPosed("posterior covariance is not finite");
  }

  GaussianPosterior post;
  post.mu = s.array() - s.mean();
  const Eigen::MatrixXd centering =
      Eigen::MatrixXd::Identity(n, n) - Eigen::MatrixXd::Constant(n, n, 1.0 / n);
  post.cov = centering * cov * centering;
  post.cov = 0.5 * (post.cov + post.cov.transpose().eval());  // clean symmetry
  return post;
}

}  // namespace pcbench
