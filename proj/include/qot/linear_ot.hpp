#pragma once

#include <vector>

#include <Eigen/Dense>

namespace qot {

/// Optimal plan of min <C, P> over nonnegative P with row sums mu and column
/// sums nu. Successive shortest augmenting paths (Dijkstra on reduced costs)
/// on the bipartite network; flows below 1e-15 count as zero.
Eigen::MatrixXd exact_linear_ot(const Eigen::MatrixXd& cost, const std::vector<double>& mu,
                                const std::vector<double>& nu);

}  // namespace qot
