#include "qot/oracle.hpp"

#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "qot/errors.hpp"
#include "qot/qp.hpp"

namespace qot {

std::size_t free_dimension(const Marginal& mu_d, const Marginal& nu_d) {
  return (mu_d.size() - 1) * (nu_d.size() - 1);
}

GridResult grid_search(const Marginal& mu_d, const Marginal& nu_d, const CostFn& c, double h,
                       bool collect_minimizers) {
  if (!(h > 0.0)) fail(ErrorCode::BadParams, "grid step must be positive");
  if (!mu_d.is_discrete() || !nu_d.is_discrete())
    fail(ErrorCode::InvalidMarginal, "grid search needs discrete marginals");
  const std::size_t dim = free_dimension(mu_d, nu_d);
  if (dim > kMaxGridDim) fail(ErrorCode::SizeLimit, "grid search needs free dimension <= 4");

  const QpForm qp = build_qp(mu_d, nu_d, c);
  const std::size_t n = qp.n_rows, m = qp.n_cols;
  Eigen::VectorXd pi = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n * m));
  std::vector<double> row(n, 0.0), col(m, 0.0);
  std::vector<std::pair<std::size_t, std::size_t>> cells;
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = 0; j + 1 < m; ++j) cells.emplace_back(i, j);

  GridResult res{SolveReport{unvectorize(qp, pi)}};
  res.free_dim = dim;
  res.h = h;
  res.lipschitz = 8.0 * qp.C.cwiseAbs().maxCoeff();
  double best = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_pi = pi;
  std::vector<Eigen::VectorXd> ties;
  auto at = [&](std::size_t i, std::size_t j) -> double& {
    return pi(static_cast<Eigen::Index>(qp.index(i, j)));
  };

  // Completes the last column and row, then scores the plan.
  auto complete = [&]() {
    double corner = qp.nu[m - 1];
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double v = qp.mu[i] - row[i];
      if (v < -1e-12) return;
      at(i, m - 1) = std::max(v, 0.0);
      corner -= at(i, m - 1);
    }
    for (std::size_t j = 0; j + 1 < m; ++j) {
      const double v = qp.nu[j] - col[j];
      if (v < -1e-12) return;
      at(n - 1, j) = std::max(v, 0.0);
    }
    if (corner < -1e-12) return;
    at(n - 1, m - 1) = std::max(corner, 0.0);
    ++res.feasible_count;
    const double f = qp.objective(pi);
    if (f < best - 1e-12) {
      best = f;
      best_pi = pi;
      ties.clear();
      if (collect_minimizers) ties.push_back(pi);
    } else if (collect_minimizers && f <= best + 1e-12) {
      ties.push_back(pi);
    }
  };

  std::function<void(std::size_t)> walk = [&](std::size_t idx) {
    if (idx == cells.size()) {
      complete();
      return;
    }
    const auto [i, j] = cells[idx];
    const double upper = std::min(qp.mu[i] - row[i], qp.nu[j] - col[j]);
    for (std::size_t k = 0;; ++k) {
      const double v = static_cast<double>(k) * h;
      if (v > upper + 1e-12) break;
      at(i, j) = v;
      row[i] += v;
      col[j] += v;
      walk(idx + 1);
      row[i] -= v;
      col[j] -= v;
    }
    at(i, j) = 0.0;
  };
  walk(0);

  if (!std::isfinite(best)) fail(ErrorCode::SizeLimit, "grid search found no feasible plan");
  res.best = SolveReport{unvectorize(qp, best_pi)};
  res.best.objective = best;
  res.best.method = "grid";
  res.best.iterations = res.feasible_count;
  res.best.trace = {best};
  res.best.termination = Termination::Exact;
  res.best.gap = res.tolerance();
  for (const auto& t : ties) {
    // Drop earlier entries that a later, strictly better point superseded.
    if (qp.objective(t) <= best + 1e-12) res.minimizers.push_back(unvectorize(qp, t));
  }
  return res;
}

double vertex_enumerate_linear(const Eigen::MatrixXd& cost, const std::vector<double>& mu,
                               const std::vector<double>& nu) {
  const std::size_t n = mu.size(), m = nu.size();
  if (static_cast<std::size_t>(cost.rows()) != n || static_cast<std::size_t>(cost.cols()) != m)
    fail(ErrorCode::SizeMismatch, "cost matrix does not match marginal sizes");
  const std::size_t cells = n * m;
  if (cells > 12) fail(ErrorCode::SizeLimit, "vertex enumeration needs N*M <= 12");
  const std::size_t basis = n + m - 1;
  double best = std::numeric_limits<double>::infinity();

  for (std::uint32_t mask = 0; mask < (1u << cells); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) != basis) continue;
    // Acyclic with n+m-1 edges means a spanning tree.
    std::vector<std::size_t> parent(n + m);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    std::function<std::size_t(std::size_t)> root = [&](std::size_t v) {
      return parent[v] == v ? v : parent[v] = root(parent[v]);
    };
    bool tree = true;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t e = 0; e < cells && tree; ++e) {
      if (!(mask >> e & 1u)) continue;
      const std::size_t i = e / m, j = e % m;
      const std::size_t a = root(i), b = root(n + j);
      if (a == b) tree = false;
      parent[a] = b;
      edges.emplace_back(i, j);
    }
    if (!tree) continue;

    // Peel leaves: a node with one remaining edge fixes that edge's flow.
    std::vector<double> rem(n + m);
    for (std::size_t i = 0; i < n; ++i) rem[i] = mu[i];
    for (std::size_t j = 0; j < m; ++j) rem[n + j] = nu[j];
    std::vector<bool> used(edges.size(), false);
    std::vector<double> flow(edges.size(), 0.0);
    for (std::size_t round = 0; round < edges.size(); ++round) {
      std::vector<int> degree(n + m, 0);
      for (std::size_t e = 0; e < edges.size(); ++e)
        if (!used[e]) {
          ++degree[edges[e].first];
          ++degree[n + edges[e].second];
        }
      for (std::size_t e = 0; e < edges.size(); ++e) {
        if (used[e]) continue;
        const std::size_t a = edges[e].first, b = n + edges[e].second;
        if (degree[a] != 1 && degree[b] != 1) continue;
        const double f = degree[a] == 1 ? rem[a] : rem[b];
        flow[e] = f;
        rem[a] -= f;
        rem[b] -= f;
        used[e] = true;
        break;
      }
    }
    bool feasible = true;
    double value = 0.0;
    for (std::size_t e = 0; e < edges.size(); ++e) {
      if (flow[e] < -1e-12) feasible = false;
      value += std::max(flow[e], 0.0) * cost(static_cast<Eigen::Index>(edges[e].first),
                                             static_cast<Eigen::Index>(edges[e].second));
    }
    if (feasible) best = std::min(best, value);
  }
  return best;
}

std::pair<std::vector<int>, std::vector<int>> interleave_supports(int n, int p, int q) {
  if (n < 1 || p < 1 || q < 1 || p > n || q > n) fail(ErrorCode::BadParams, "need 1 <= p, q <= n");
  std::vector<int> seq;
  int lo = 1, hi = n;
  while (lo <= hi) {
    seq.push_back(lo++);
    if (lo <= hi) seq.push_back(hi--);
  }
  return {std::vector<int>(seq.end() - p, seq.end()), std::vector<int>(seq.end() - q, seq.end())};
}

}  // namespace qot
