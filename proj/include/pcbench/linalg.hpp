#pragma once

#include <Eigen/Dense>

#include "pcbench/pcm.hpp"

namespace pcbench {

// Moore-Penrose pseudo-inverse of a symmetric PSD matrix via
// eigendecomposition. Eigenvalues below rel_tol * max_eigenvalue are
// treated as exact zeros.
Eigen::MatrixXd pseudo_inverse_psd(const Eigen::MatrixXd& m, double rel_tol = 1e-10);

// Weighted graph Laplacian of the comparison graph, edge weight
// n_ij = counts[i][j] + counts[j][i].
Eigen::MatrixXd comparison_laplacian(const PCMatrix& pcm);

// True when every stimulus is reachable through pairs with at least one vote.
bool comparison_graph_connected(const PCMatrix& pcm);

// Effective resistance (e_i - e_j)^T L+ (e_i - e_j) from a Laplacian
// pseudo-inverse.
inline double effective_resistance(const Eigen::MatrixXd& lap_pinv, int i, int j) {
  return lap_pinv(i, i) + lap_pinv(j, j) - 2.0 * lap_pinv(i, j);
}

}  // namespace pcbench
