#include "pcbench/linalg.hpp"

#include <vector>

namespace pcbench {

Eigen::MatrixXd pseudo_inverse_psd(const Eigen::MatrixXd& m, double rel_tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  const Eigen::VectorXd& vals = es.eigenvalues();
  const double cutoff = rel_tol * std::max(vals.cwiseAbs().maxCoeff(), 1e-300);
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(vals.size());
  for (Eigen::Index k = 0; k < vals.size(); ++k) {
    if (vals[k] > cutoff) inv[k] = 1.0 / vals[k];
  }
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

Eigen::MatrixXd comparison_laplacian(const PCMatrix& pcm) {
  const int n = pcm.size();
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double w = pcm.pair_total(i, j);
      lap(i, j) = -w;
      lap(i, i) += w;
    }
  }
  return lap;
}

bool comparison_graph_connected(const PCMatrix& pcm) {
  const int n = pcm.size();
  std::vector<char> seen(n, 0);
  std::vector<int> stack = {0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    const int i = stack.back();
    stack.pop_back();
    for (int j = 0; j < n; ++j) {
      if (!seen[j] && i != j && pcm.pair_total(i, j) > 0.0) {
        seen[j] = 1;
        ++reached;
        stack.push_back(j);
      }
    }
  }
  return reached == n;
}

}  // namespace pcbench
