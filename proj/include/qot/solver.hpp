#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qot/costs.hpp"
#include "qot/couplings.hpp"
#include "qot/qp.hpp"

namespace qot {

enum class Termination { GapTol, MaxIter, LocalOpt, Exact };

std::string to_string(Termination t);

struct SolveReport {
  explicit SolveReport(TransportPlan p) : plan(std::move(p)) {}

  TransportPlan plan;
  double objective = 0.0;
  std::string method;
  std::size_t iterations = 0;
  std::vector<double> trace;
  Termination termination = Termination::Exact;
  std::optional<Certificate> certificate;
  /// "global" only when the instance is certified convex or solved exactly.
  std::string optimality = "stationary";
  double gap = 0.0;
  /// Permutation for Monge solvers (x_i -> y_perm[i]); empty otherwise.
  std::vector<std::size_t> perm;
};

struct FwOptions {
  double gap_tol = 1e-8;
  std::size_t max_iter = 10000;
  /// Run the eigenvalue certificate first (skipped for very large QPs).
  bool certify = true;
};

/// Frank-Wolfe with exact quadratic line search. The linear subproblem is
/// solved by exact_linear_ot on the gradient (C + C^T) pi.
SolveReport solve_frank_wolfe(const QpForm& qp, const TransportPlan& init, const FwOptions& opt = {});

/// Uniform-weight Monge objective (1/n^2) sum_{i,k} c(x_i, y_perm[i], x_k, y_perm[k]).
double monge_objective(const std::vector<double>& xs, const std::vector<double>& ys,
                       const CostFn& c, const std::vector<std::size_t>& perm);

/// Best-improvement pair exchange from `init_perm`; ties go to the
/// lexicographically smallest swap (i,j). Set `maximize` to search the other
/// direction (the reported objective stays that of c itself).
SolveReport solve_pair_exchange(const std::vector<double>& xs, const std::vector<double>& ys,
                                const CostFn& c, std::vector<std::size_t> init_perm,
                                std::size_t max_iter = 100000, std::uint64_t seed = 0,
                                bool maximize = false);

/// Best of `restarts` runs from random permutations drawn with derive_seed(seed, r).
SolveReport solve_pair_exchange_multi(const std::vector<double>& xs, const std::vector<double>& ys,
                                      const CostFn& c, std::size_t restarts, std::uint64_t seed,
                                      std::size_t max_iter = 100000, bool maximize = false);

/// No single swap strictly improves (full recomputation per swap).
bool is_two_opt(const std::vector<double>& xs, const std::vector<double>& ys, const CostFn& c,
                const std::vector<std::size_t>& perm, bool maximize = false);

/// Exact Monge optimum over all n! permutations (n <= 9).
SolveReport solve_exhaustive(const std::vector<double>& xs, const std::vector<double>& ys,
                             const CostFn& c, bool maximize = false);

std::vector<std::size_t> random_permutation(std::size_t n, std::uint64_t seed);

}  // namespace qot
