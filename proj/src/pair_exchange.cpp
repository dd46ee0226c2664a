#include <algorithm>
#include <cmath>
#include <numeric>

#include "qot/errors.hpp"
#include "qot/rng.hpp"
#include "qot/solver.hpp"

namespace qot {

namespace {

constexpr std::size_t kTensorLimit = 8'000'000;

// c(x_i, y_a, x_k, y_b), cached as a dense n^4 table when small enough.
class CostTable {
 public:
  CostTable(const std::vector<double>& xs, const std::vector<double>& ys, const CostFn& c)
      : xs_(xs), ys_(ys), c_(c), n_(xs.size()) {
    if (n_ * n_ * n_ * n_ <= kTensorLimit) {
      table_.resize(n_ * n_ * n_ * n_);
      for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t a = 0; a < n_; ++a)
          for (std::size_t k = 0; k < n_; ++k)
            for (std::size_t b = 0; b < n_; ++b) table_[((i * n_ + a) * n_ + k) * n_ + b] = eval(i, a, k, b);
    }
  }

  double operator()(std::size_t i, std::size_t a, std::size_t k, std::size_t b) const {
    if (!table_.empty()) return table_[((i * n_ + a) * n_ + k) * n_ + b];
    return eval(i, a, k, b);
  }

 private:
  double eval(std::size_t i, std::size_t a, std::size_t k, std::size_t b) const {
    const double v = c_(xs_[i], ys_[a], xs_[k], ys_[b]);
    if (!std::isfinite(v)) fail(ErrorCode::NonFiniteCost, "cost '" + c_.id + "' is not finite on the supports");
    return v;
  }

  const std::vector<double>& xs_;
  const std::vector<double>& ys_;
  const CostFn& c_;
  std::size_t n_;
  std::vector<double> table_;
};

double objective_with(const CostTable& t, const std::vector<std::size_t>& p) {
  const std::size_t n = p.size();
  double sum = 0.0, comp = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const double y = t(i, p[i], k, p[k]) - comp;
      const double s = sum + y;
      comp = (s - sum) - y;
      sum = s;
    }
  return sum / static_cast<double>(n * n);
}

// Unnormalised objective change when swapping the targets of i and j.
double swap_delta(const CostTable& t, const std::vector<std::size_t>& p, std::size_t i, std::size_t j) {
  const std::size_t a = p[i], b = p[j];
  double d = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (k == i || k == j) continue;
    const std::size_t s = p[k];
    d += t(i, b, k, s) + t(k, s, i, b) + t(j, a, k, s) + t(k, s, j, a);
    d -= t(i, a, k, s) + t(k, s, i, a) + t(j, b, k, s) + t(k, s, j, b);
  }
  d += t(i, b, i, b) + t(j, a, j, a) + t(i, b, j, a) + t(j, a, i, b);
  d -= t(i, a, i, a) + t(j, b, j, b) + t(i, a, j, b) + t(j, b, i, a);
  return d;
}

void check_sizes(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) fail(ErrorCode::SizeMismatch, "Monge supports must have equal size");
  if (xs.empty()) fail(ErrorCode::SizeMismatch, "Monge supports are empty");
}

void check_perm(const std::vector<std::size_t>& p, std::size_t n) {
  if (p.size() != n) fail(ErrorCode::SizeMismatch, "permutation has the wrong length");
  std::vector<bool> seen(n, false);
  for (std::size_t v : p) {
    if (v >= n || seen[v]) fail(ErrorCode::BadParams, "not a permutation");
    seen[v] = true;
  }
}

}  // namespace

double monge_objective(const std::vector<double>& xs, const std::vector<double>& ys,
                       const CostFn& c, const std::vector<std::size_t>& perm) {
  check_sizes(xs, ys);
  check_perm(perm, xs.size());
  const std::size_t n = xs.size();
  double sum = 0.0, comp = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const double v = c(xs[i], ys[perm[i]], xs[k], ys[perm[k]]);
      if (!std::isfinite(v)) fail(ErrorCode::NonFiniteCost, "cost '" + c.id + "' is not finite on the supports");
      const double y = v - comp;
      const double s = sum + y;
      comp = (s - sum) - y;
      sum = s;
    }
  return sum / static_cast<double>(n * n);
}

std::vector<std::size_t> random_permutation(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = n; i > 1; --i) std::swap(p[i - 1], p[rng.below(i)]);
  return p;
}

SolveReport solve_pair_exchange(const std::vector<double>& xs, const std::vector<double>& ys,
                                const CostFn& c, std::vector<std::size_t> perm, std::size_t max_iter,
                                std::uint64_t /*seed*/, bool maximize) {
  check_sizes(xs, ys);
  const std::size_t n = xs.size();
  check_perm(perm, n);
  const CostTable table(xs, ys, c);
  const double sign = maximize ? -1.0 : 1.0;
  const double nn = static_cast<double>(n * n);

  double f = objective_with(table, perm);
  std::vector<double> trace{f};
  std::size_t it = 0;
  Termination term = Termination::MaxIter;
  for (; it < max_iter; ++it) {
    double best = 0.0;
    std::size_t bi = 0, bj = 0;
    const double tol = 1e-13 * std::max(1.0, std::abs(f));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const double d = sign * swap_delta(table, perm, i, j) / nn;
        if (d < best && d < -tol) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    if (best == 0.0) {
      term = Termination::LocalOpt;
      break;
    }
    std::swap(perm[bi], perm[bj]);
    f += sign * best;
    trace.push_back(f);
  }
  const double exact = objective_with(table, perm);
  SolveReport rep{permutation_plan(xs, ys, perm)};
  rep.objective = exact;
  rep.method = "swap";
  rep.iterations = it;
  rep.trace = std::move(trace);
  rep.termination = term;
  rep.perm = std::move(perm);
  return rep;
}

SolveReport solve_pair_exchange_multi(const std::vector<double>& xs, const std::vector<double>& ys,
                                      const CostFn& c, std::size_t restarts, std::uint64_t seed,
                                      std::size_t max_iter, bool maximize) {
  if (restarts == 0) fail(ErrorCode::BadParams, "need at least one restart");
  std::optional<SolveReport> best;
  for (std::size_t r = 0; r < restarts; ++r) {
    const std::uint64_t s = derive_seed(seed, r);
    auto rep = solve_pair_exchange(xs, ys, c, random_permutation(xs.size(), s), max_iter, s, maximize);
    const bool better = !best || (maximize ? rep.objective > best->objective : rep.objective < best->objective);
    if (better) best = std::move(rep);
  }
  best->method = "swap-multi";
  return std::move(*best);
}

bool is_two_opt(const std::vector<double>& xs, const std::vector<double>& ys, const CostFn& c,
                const std::vector<std::size_t>& perm, bool maximize) {
  const double f = monge_objective(xs, ys, c, perm);
  const double sign = maximize ? -1.0 : 1.0;
  const double tol = 1e-12 * std::max(1.0, std::abs(f));
  auto p = perm;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      std::swap(p[i], p[j]);
      const double g = monge_objective(xs, ys, c, p);
      std::swap(p[i], p[j]);
      if (sign * (g - f) < -tol) return false;
    }
  return true;
}

SolveReport solve_exhaustive(const std::vector<double>& xs, const std::vector<double>& ys,
                             const CostFn& c, bool maximize) {
  check_sizes(xs, ys);
  const std::size_t n = xs.size();
  if (n > 9) fail(ErrorCode::SizeLimit, "exhaustive search is limited to n <= 9");
  const CostTable table(xs, ys, c);
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), std::size_t{0});
  std::vector<std::size_t> best_p = p;
  double best = objective_with(table, p);
  std::size_t count = 0;
  do {
    ++count;
    const double f = objective_with(table, p);
    if (maximize ? f > best : f < best) {
      best = f;
      best_p = p;
    }
  } while (std::next_permutation(p.begin(), p.end()));
  SolveReport rep{permutation_plan(xs, ys, best_p)};
  rep.objective = best;
  rep.method = "exact-perm";
  rep.iterations = count;
  rep.trace = {best};
  rep.termination = Termination::Exact;
  rep.optimality = "global";
  rep.perm = std::move(best_p);
  return rep;
}

}  // namespace qot
