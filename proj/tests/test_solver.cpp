#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <numeric>

#include "qot/costs.hpp"
#include "qot/couplings.hpp"
#include "qot/errors.hpp"
#include "qot/estimator.hpp"
#include "qot/oracle.hpp"
#include "qot/qp.hpp"
#include "qot/rng.hpp"
#include "qot/solver.hpp"

using namespace qot;

TEST_CASE("frank-wolfe on the two-point rectangular instance") {
  const auto b = Marginal::bernoulli(0.5);
  const auto qp = build_qp(b, b, catalog("rect"));
  const auto r = solve_frank_wolfe(qp, to_plan(Copula::comonotone(), b, b));
  CHECK(r.objective == doctest::Approx(0.25));
  CHECK(2 * r.plan(1, 1) == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(r.optimality == "stationary");  // rect is not psd
  CHECK(r.plan.marginal_error(b, b) <= 1e-12);
}

TEST_CASE("frank-wolfe certifies convex instances") {
  const auto mu = discretize(Marginal::uniform(-0.5, 0.5), 6);
  const auto r = solve_frank_wolfe(build_qp(mu, mu, catalog("gauss")), independent_plan(mu, mu));
  REQUIRE(r.certificate);
  CHECK(r.certificate->psd);
  CHECK(r.termination == Termination::GapTol);
  CHECK(r.optimality == "global");
  CHECK(r.objective <= qcost_exact(to_plan(Copula::diamond(), mu, mu), catalog("gauss")) + 1e-8);
}

TEST_CASE("frank-wolfe traces never increase") {
  Rng rng(3);
  for (int t = 0; t < 10; ++t) {
    std::vector<double> xs{0, 0.4, 1.3, 2}, wx(4), ys{-1, 0, 0.7}, wy(3);
    double sx = 0, sy = 0;
    for (auto& w : wx) sx += (w = 0.1 + rng.uniform());
    for (auto& w : wy) sy += (w = 0.1 + rng.uniform());
    for (auto& w : wx) w /= sx;
    for (auto& w : wy) w /= sy;
    const auto mu = Marginal::discrete(xs, wx), nu = Marginal::discrete(ys, wy);
    for (const auto& id : {"rect", "ineq", "kendall", "gauss"}) {
      const auto r = solve_frank_wolfe(build_qp(mu, nu, catalog(id)), to_plan(Copula::v(), mu, nu));
      for (std::size_t k = 1; k < r.trace.size(); ++k) CHECK(r.trace[k] <= r.trace[k - 1] + 1e-14);
      CHECK(r.plan.marginal_error(mu, nu) <= 1e-9);
    }
  }
}

TEST_CASE("frank-wolfe rejects infeasible starts") {
  const auto b = Marginal::bernoulli(0.5);
  const TransportPlan bad({0, 1}, {0, 1}, {0.5, 0.5, 0, 0});
  CHECK_THROWS_AS(solve_frank_wolfe(build_qp(b, b, catalog("rect")), bad), Error);
}

TEST_CASE("pair exchange stops at a 2-opt permutation") {
  const std::vector<double> xs{0, 1, 2, 3, 4, 5, 6}, ys{-3, -1, 0, 0.5, 2, 2.5, 7};
  const auto c = catalog("qrect", {{"q", 1.5}});
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto r = solve_pair_exchange(xs, ys, c, random_permutation(7, s));
    CHECK(r.termination == Termination::LocalOpt);
    CHECK(is_two_opt(xs, ys, c, r.perm));
    CHECK(r.objective == doctest::Approx(monge_objective(xs, ys, c, r.perm)));
    const auto m = solve_pair_exchange(xs, ys, c, random_permutation(7, s), 100000, 0, true);
    CHECK(is_two_opt(xs, ys, c, m.perm, true));
  }
}

TEST_CASE("exhaustive search matches an independent enumeration") {
  const std::vector<double> xs{0, 0.3, 1, 1.7, 2.2, 3}, ys{-1, -0.2, 0.1, 0.9, 1.4, 4};
  const auto c = catalog("gw", {{"p", 2}, {"q", 1}});
  std::vector<std::size_t> perm(6);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  double lo = 1e300, hi = -1e300;
  do {
    double v = 0.0;
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t k = 0; k < 6; ++k) v += c(xs[i], ys[perm[i]], xs[k], ys[perm[k]]);
    lo = std::min(lo, v / 36);
    hi = std::max(hi, v / 36);
  } while (std::next_permutation(perm.begin(), perm.end()));
  CHECK(solve_exhaustive(xs, ys, c).objective == doctest::Approx(lo).epsilon(1e-13));
  CHECK(solve_exhaustive(xs, ys, c, true).objective == doctest::Approx(hi).epsilon(1e-13));
  const auto multi = solve_pair_exchange_multi(xs, ys, c, 720, 1);
  CHECK(multi.objective == doctest::Approx(lo).epsilon(1e-13));
  CHECK_THROWS_AS(solve_exhaustive(std::vector<double>(10, 0.0), std::vector<double>(10, 0.0), c), Error);
}

TEST_CASE("multi-restart pair exchange is reproducible") {
  const std::vector<double> xs{0, 1, 2, 3, 4, 5, 6, 7}, ys{0, 1, 2, 3, 4, 5, 6, 7};
  const auto c = catalog("linexp", {{"gamma", 2}});
  const auto a = solve_pair_exchange_multi(xs, ys, c, 5, 11, 100000, true);
  const auto b = solve_pair_exchange_multi(xs, ys, c, 5, 11, 100000, true);
  CHECK(a.perm == b.perm);
  CHECK(random_permutation(8, 3) == random_permutation(8, 3));
}
