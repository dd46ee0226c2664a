#include "qot/linear_ot.hpp"

#include <cmath>
#include <limits>

#include "qot/errors.hpp"

namespace qot {

Eigen::MatrixXd exact_linear_ot(const Eigen::MatrixXd& cost, const std::vector<double>& mu,
                                const std::vector<double>& nu) {
  const Eigen::Index n = cost.rows(), m = cost.cols();
  if (n != static_cast<Eigen::Index>(mu.size()) || m != static_cast<Eigen::Index>(nu.size()))
    fail(ErrorCode::SizeMismatch, "cost matrix does not match marginal sizes");
  if (!cost.allFinite()) fail(ErrorCode::NonFiniteCost, "linear OT cost matrix is not finite");
  constexpr double eps = 1e-15;
  constexpr double inf = std::numeric_limits<double>::infinity();

  // Shift so every forward arc starts with a nonnegative reduced cost.
  const Eigen::MatrixXd c = cost.array() - cost.minCoeff();
  Eigen::MatrixXd flow = Eigen::MatrixXd::Zero(n, m);
  std::vector<double> supply(mu), demand(nu);
  // Rows are nodes [0,n), columns [n,n+m), then a super source and sink.
  const Eigen::Index S = n + m, T = n + m + 1, nodes = n + m + 2;
  std::vector<double> pot(nodes, 0.0), dist(nodes);
  std::vector<Eigen::Index> parent(nodes);
  std::vector<bool> done(nodes);

  for (;;) {
    bool any_supply = false, any_demand = false;
    for (double s : supply) any_supply |= s > eps;
    for (double d : demand) any_demand |= d > eps;
    if (!any_supply || !any_demand) break;

    std::fill(dist.begin(), dist.end(), inf);
    std::fill(parent.begin(), parent.end(), -1);
    std::fill(done.begin(), done.end(), false);
    dist[S] = 0.0;

    auto relax = [&](Eigen::Index u, Eigen::Index v, double arc) {
      const double nd = dist[u] + std::max(0.0, arc + pot[u] - pot[v]);
      if (nd < dist[v]) {
        dist[v] = nd;
        parent[v] = u;
      }
    };
    for (;;) {
      Eigen::Index u = -1;
      for (Eigen::Index v = 0; v < nodes; ++v)
        if (!done[v] && dist[v] < inf && (u < 0 || dist[v] < dist[u])) u = v;
      if (u < 0 || u == T) break;
      done[u] = true;
      if (u == S) {
        for (Eigen::Index i = 0; i < n; ++i)
          if (supply[i] > eps) relax(S, i, 0.0);
      } else if (u < n) {
        for (Eigen::Index j = 0; j < m; ++j)
          if (!done[n + j]) relax(u, n + j, c(u, j));
      } else {
        const Eigen::Index j = u - n;
        for (Eigen::Index i = 0; i < n; ++i)
          if (!done[i] && flow(i, j) > eps) relax(u, i, -c(i, j));
        if (demand[j] > eps) relax(u, T, 0.0);
      }
    }
    if (!(dist[T] < inf)) fail(ErrorCode::SizeMismatch, "linear OT found no augmenting path");
    const double bound = dist[T];
    for (Eigen::Index v = 0; v < nodes; ++v) pot[v] += std::min(dist[v], bound);

    const Eigen::Index last_col = parent[T];
    double amount = demand[last_col - n];
    Eigen::Index v = last_col;
    while (parent[v] != S) {
      const Eigen::Index u = parent[v];
      if (u >= n) amount = std::min(amount, flow(v, u - n));
      v = u;
    }
    const Eigen::Index source = v;
    amount = std::min(amount, supply[source]);

    v = last_col;
    while (v != source) {
      const Eigen::Index u = parent[v];
      if (u < n)
        flow(u, v - n) += amount;
      else
        flow(v, u - n) = std::max(0.0, flow(v, u - n) - amount);
      v = u;
    }
    supply[source] -= amount;
    demand[last_col - n] -= amount;
  }
  return flow;
}

}  // namespace qot
