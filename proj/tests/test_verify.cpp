#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "qot/errors.hpp"
#include "qot/rng.hpp"
#include "qot/verify.hpp"

using namespace qot;

TEST_CASE("panel") {
  const auto p = coupling_panel();
  REQUIRE(p.size() == 8);
  const auto b = Marginal::bernoulli(0.5);
  const auto vals = evaluate_panel(b, b, catalog("rect"), {Copula::v_inverted()});
  CHECK(vals.size() == 9);
  CHECK(vals.back().first == "vinv");
}

TEST_CASE("rectangular diamond check") {
  const auto b = Marginal::bernoulli(0.5);
  const auto r = check_diamond_rectangular(b, b);
  CHECK(r.pass());
  CHECK(r.detail("obj_dia") == doctest::Approx(0.25));
  CHECK(r.detail("obj_ind") == doctest::Approx(0.25));
  CHECK(r.detail("grid_opt") == doctest::Approx(0.25));
  const auto pm = Marginal::discrete({1.0}, {1.0});
  const auto t = check_diamond_rectangular(pm, pm);
  CHECK(t.pass());
  CHECK(t.detail("obj_com") == 0.0);
  CHECK(check_diamond_ranking(Marginal::uniform(0, 1), Marginal::normal(0, 1)).pass());
}

TEST_CASE("a non-diamond target fails the same panel") {
  // Negative control: the comonotone plan is not minimal for the rectangular cost.
  const auto U = Marginal::uniform(0, 1);
  auto c = catalog("rect");
  const auto r = check_comonotone_submodular(U, U, c, 10, CopulaKind::Comonotone);
  CHECK(r.status == CheckStatus::HypothesisViolated);
}

TEST_CASE("comonotone and antimonotone checks") {
  const auto U = Marginal::uniform(0, 1), N = Marginal::normal(0, 1);
  CHECK(check_comonotone_submodular(U, N, catalog("maxxy"), 20, CopulaKind::Comonotone).pass());
  CHECK(check_comonotone_submodular(U, U, catalog("gini"), 20, CopulaKind::Antimonotone).pass());
  const auto k = check_comonotone_submodular(U, U, catalog("kendall"), 30, CopulaKind::Comonotone, true);
  CHECK(k.pass());
  CHECK(k.detail("obj_com") == doctest::Approx(1.0 - 1.0 / 30));
  CHECK(check_comonotone_submodular(U, N, catalog("maxxy"), 20, CopulaKind::Antimonotone).status ==
        CheckStatus::HypothesisViolated);
  CHECK_THROWS_AS(check_comonotone_submodular(U, N, catalog("maxxy"), 20, CopulaKind::Diamond), Error);
}

TEST_CASE("gw location-scale checks") {
  const Bivariate negprod = [](double u, double v) { return -u * v; };
  const auto r = check_gw_location_scale(Marginal::normal(0, 1), 1.0, 0.0, "negprod", negprod);
  CHECK(r.pass());
  CHECK(r.detail("com_ant_gap") <= 1e-9);
  const auto e = check_gw_location_scale(Marginal::exponential(1), -1.0, 0.0, "negprod", negprod);
  CHECK(e.pass());
  CHECK(e.detail("obj_ant") < e.detail("obj_com"));
  const Bivariate prod = [](double u, double v) { return u * v; };
  CHECK(check_gw_location_scale(Marginal::normal(0, 1), 1.0, 0.0, "prod", prod).status ==
        CheckStatus::HypothesisViolated);
  CHECK_THROWS_AS(check_gw_location_scale(Marginal::normal(0, 1), 0.0, 0.0, "negprod", negprod), Error);
}

TEST_CASE("v transport check") {
  const auto U = Marginal::uniform(0, 1);
  const Bivariate g = [U](double y, double yp) { return U.cdf(y) * U.cdf(yp); };
  const auto r = check_v_transport(U, "u", [](double u) { return u; }, "F(y)F(y')", g, 20);
  CHECK(r.pass());
  CHECK(r.detail("obj_vinv") < r.detail("obj_v"));
  const Bivariate dec = [](double y, double yp) { return (1 - y) * (1 - yp); };
  CHECK(check_v_transport(U, "u", [](double u) { return u; }, "dec", dec, 10).status ==
        CheckStatus::HypothesisViolated);
}

TEST_CASE("kernel check") {
  const auto H = Marginal::uniform(-0.5, 0.5);
  const auto r = check_diamond_kernel(H, H, {KernelKind::Exp, 0.5, 0.0}, 10);
  CHECK(r.pass());
  CHECK(r.detail("psd") == 1.0);
  CHECK(check_diamond_kernel(Marginal::uniform(-2, 2), H, {KernelKind::Exp, 5.0, 0.0}, 10).status ==
        CheckStatus::HypothesisViolated);
  CHECK_THROWS_AS(check_diamond_kernel(Marginal::exponential(1), H, {KernelKind::Exp, 0.5, 0.0}, 10), Error);
  CHECK_THROWS_AS(check_diamond_kernel(H, H, {KernelKind::StretchedExp, 0.1, 0.3}, 10), Error);
}

TEST_CASE("q-rectangular check") {
  const auto W = Marginal::uniform(-1, 1);
  const auto r = check_qrect_symmetric(W, W, 2.0, 12, 10, 3);
  CHECK(r.pass());
  CHECK(r.detail("dia_minus_pair_exchange") <= 1e-12);
  CHECK_THROWS_AS(check_qrect_symmetric(Marginal::exponential(1), W, 1.5, 12, 10, 3), Error);
  CHECK(check_qrect_symmetric(Marginal::exponential(1), W, 1.0, 12, 10, 3).pass());
}

TEST_CASE("separability agrees with the centred least-squares test") {
  const auto mu = Marginal::discrete({0, 1, 2}, {0.2, 0.3, 0.5});
  const auto nu = Marginal::discrete({-1, 1}, {0.5, 0.5});
  const auto cov = check_separability(mu, nu, catalog("cov"));
  CHECK_FALSE(cov.pass());
  CHECK(cov.detail("max_centered_residual") > 1e-3);
  const auto b = Marginal::bernoulli(0.5);
  const auto rect = check_separability(b, b, catalog("rect"));
  CHECK(rect.pass());
  CHECK(rect.detail("ctilde_min") == doctest::Approx(0.25));
  Rng rng(5);
  for (int t = 0; t < 10; ++t) {
    const double a = rng.uniform(), s = rng.uniform() < 0.5 ? 0.0 : rng.uniform();
    CostFn c;
    c.id = "mixed";
    c.eval = [a, s](double x, double y, double xp, double yp) { return a * x * xp + s * x * y + y * yp * yp; };
    const auto r = check_separability(mu, nu, c);
    CHECK((r.detail("max_double_difference") <= 1e-9) == (r.detail("max_centered_residual") <= 1e-9));
    CHECK(r.pass() == (s == 0.0));
  }
}

TEST_CASE("qreg and sparse separable instances") {
  const auto q = check_qreg_independent(Marginal::discrete({0, 1, 2}, {0.2, 0.3, 0.5}),
                                        Marginal::discrete({0, 1}, {0.4, 0.6}));
  CHECK(q.pass());
  CHECK(q.detail("ind_objective") == doctest::Approx(1.0));
  const auto s = check_sparse_minimizers();
  CHECK(s.pass());
  CHECK(s.detail("grid_minimizers") == 2);
  CHECK(s.detail("grid_min") < s.detail("ind_objective"));
}

TEST_CASE("gamma sweep") {
  const auto U = Marginal::uniform(0, 1);
  GammaSweepOptions opt;
  opt.n_disc = 20;
  opt.restarts = 3;
  opt.blocks = 5;
  const auto pm = gamma_sweep(U, Marginal::discrete({0.0}, {1.0}), {1.0, 2.0}, opt);
  CHECK(pm.pass());
  CHECK_THROWS_AS(gamma_sweep(U, U, {0.0}, opt), Error);
  CHECK_THROWS_AS(gamma_sweep(U, U, {}, opt), Error);
  const auto r = gamma_sweep(U, Marginal::uniform(1, 3), {0.3, 6.0}, opt);
  CHECK(r.detail("location_scale") == 1.0);
  CHECK(r.detail("location_scale_minimizer_ok") == 1.0);
}

TEST_CASE("suites") {
  CHECK_THROWS_AS(run_suite("nope", 0), Error);
  const auto a = run_suite("separability", 4), b = run_suite("separability", 4);
  REQUIRE(a.size() == 3);
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].check_id == b[k].check_id);
    CHECK(a[k].details == b[k].details);
    CHECK(a[k].seed == b[k].seed);
    CHECK(a[k].pass());
  }
}
