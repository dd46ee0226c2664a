#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qot/costs.hpp"
#include "qot/couplings.hpp"
#include "qot/solver.hpp"

namespace qot {

struct GridResult {
  explicit GridResult(SolveReport r) : best(std::move(r)) {}

  SolveReport best;
  std::size_t free_dim = 0;
  std::size_t feasible_count = 0;
  double h = 0.0;
  /// 8 * max |C|: bound on the objective's sensitivity to one free coordinate.
  double lipschitz = 0.0;
  /// Every grid plan within 1e-12 of the minimum (only when requested).
  std::vector<TransportPlan> minimizers;

  double tolerance() const { return lipschitz * h * static_cast<double>(free_dim); }
};

inline constexpr std::size_t kMaxGridDim = 4;

std::size_t free_dimension(const Marginal& mu_d, const Marginal& nu_d);

/// Enumerates plans whose top-left (N-1)x(M-1) block lies on the h-grid;
/// the last row and column are completed from the marginals and candidates
/// with a negative completion are skipped. SizeLimit when the free dimension
/// exceeds 4.
GridResult grid_search(const Marginal& mu_d, const Marginal& nu_d, const CostFn& c, double h,
                       bool collect_minimizers = false);

/// Minimum linear objective over the basic feasible solutions (spanning-tree
/// bases) of the transportation polytope. N*M <= 12.
double vertex_enumerate_linear(const Eigen::MatrixXd& cost, const std::vector<double>& mu,
                               const std::vector<double>& nu);

/// Last p and last q terms of 1, n, 2, n-1, 3, ... in sequence order.
std::pair<std::vector<int>, std::vector<int>> interleave_supports(int n, int p, int q);

}  // namespace qot
