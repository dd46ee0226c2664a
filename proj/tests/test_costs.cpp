#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "qot/costs.hpp"
#include "qot/couplings.hpp"
#include "qot/errors.hpp"
#include "qot/estimator.hpp"

using namespace qot;

TEST_CASE("catalog values at a test point") {
  const double x = 0.3, y = -1.0, xp = 1.1, yp = 0.5;
  const double dx = std::abs(x - xp), dy = std::abs(y - yp);
  CHECK(catalog("rect")(x, y, xp, yp) == doctest::Approx(dx * dy));
  CHECK(catalog("qrect", {{"q", 1.5}})(x, y, xp, yp) == doctest::Approx(std::pow(dx * dy, 1.5)));
  CHECK(catalog("ineq")(x, y, xp, yp) == doctest::Approx((dx + dy) * (dx + dy)));
  CHECK(catalog("ineq", {{"t1", 2}, {"t2", 0}})(x, y, xp, yp) == doctest::Approx(4 * dx * dx));
  CHECK(catalog("gw", {{"p", 2}, {"q", 1}})(x, y, xp, yp) == doctest::Approx((dx - dy) * (dx - dy)));
  CHECK(catalog("kendall")(x, y, xp, yp) == 1.0);
  CHECK(catalog("kendall")(x, y, xp, -2.0) == -1.0);
  CHECK(catalog("kendall")(x, y, x, yp) == 0.0);
  CHECK(catalog("cov")(x, y, xp, yp) == doctest::Approx(0.5 * (x - xp) * (y - yp)));
  CHECK(catalog("gini")(x, y, xp, yp) == doctest::Approx(std::abs(x + y - xp - yp)));
  CHECK(catalog("linexp", {{"gamma", 2}})(x, y, xp, yp) == doctest::Approx(dy * std::exp(-2 * dx)));
  CHECK(catalog("gauss", {{"alpha", 0.5}})(x, y, xp, yp) == doctest::Approx(std::exp(-0.5 * (dx * dx + dy * dy))));
  CHECK(catalog("powk")(x, y, xp, yp) == doctest::Approx(1.0 / ((4 + dx * dx) * (4 + dy * dy))));
  CHECK(catalog("sexp")(x, y, xp, yp) ==
        doctest::Approx(std::exp(-0.1 * (std::pow(dx, 1.5) + std::pow(dy, 1.5)))));
  CHECK(catalog("negprod", {{"beta", 2}})(x, y, xp, yp) == doctest::Approx(-dx * dx * dy * dy));
  CHECK(catalog("gwneg")(x, y, xp, yp) == doctest::Approx(-std::pow(dx, -0.25) * std::pow(dy, -0.25)));
  CHECK(std::isinf(catalog("gwneg")(x, y, x, yp)));
  CHECK(catalog("maxgw")(x, y, xp, yp) == doctest::Approx(std::max(dx, dy)));
  CHECK(catalog("maxxy")(x, y, xp, yp) == doctest::Approx(std::max(std::abs(x - y), std::abs(xp - yp))));
}

TEST_CASE("unknown costs and bad parameters") {
  CHECK_THROWS_AS(catalog("nope"), Error);
  CHECK_THROWS_AS(catalog("qrect", {{"q", -1}}), Error);
  CHECK_THROWS_AS(catalog("rect", {{"q", 1}}), Error);
  CHECK_THROWS_AS(parse_cost("qrect:q=abc"), Error);
  CHECK_THROWS_AS(parse_cost("qreg"), Error);
}

TEST_CASE("describe round trips through parse_cost") {
  for (const std::string spec : {"rect", "qrect:q=1.5", "ineq:t1=2,t2=0.5", "linexp:gamma=6", "sexp:alpha=0.2,p=0.6"}) {
    const auto c = parse_cost(spec);
    const auto d = parse_cost(c.describe());
    CHECK(d.describe() == c.describe());
    CHECK(d(0.1, 0.2, 0.7, -0.4) == c(0.1, 0.2, 0.7, -0.4));
  }
}

TEST_CASE("product costs") {
  const auto c = parse_cost("quadprod:f=0/0/0/1/1/2,g=0/0/0/-4/-1/4");
  REQUIRE(c.f_coeffs);
  // -(x+y)^2 (2x'-y')^2
  CHECK(c(1.0, 2.0, 0.5, -1.0) == doctest::Approx(-9.0 * 4.0));
  const auto s = parse_cost("subprod:f=negxy,a1=0.25,a2=0.5");
  CHECK(s(1.0, 2.0, 3.0, 1.0) == doctest::Approx((-2.0 + 0.25) * (-3.0 + 0.5)));
  const auto v = variance_cost("sum", named_bivariate("sum"));
  CHECK(v(1, 2, 0, 0) == doctest::Approx(4.5));
}

TEST_CASE("qreg cost uses the atom masses") {
  const auto mu = Marginal::discrete({0, 1}, {0.25, 0.75});
  const auto nu = Marginal::discrete({0, 2}, {0.5, 0.5});
  const auto c = qreg_cost(mu, nu);
  CHECK(c(1, 2, 1, 2) == doctest::Approx(1.0 / (0.75 * 0.5)));
  CHECK(c(1, 2, 0, 2) == 0.0);
}

TEST_CASE("irrelevant terms shift every coupling by the same amount") {
  const auto mu = discretize(Marginal::uniform(0, 1), 6);
  const auto nu = discretize(Marginal::exponential(1.0), 6);
  const auto base = catalog("rect");
  const auto aug = augment_irrelevant(
      base, [](double x, double xp) { return x * xp + 1.0; }, [](double y, double yp) { return std::abs(y - yp); },
      [](double x, double yp) { return x * yp; }, {});
  double shift = 0.0;
  bool first = true;
  for (const auto& cop : {Copula::comonotone(), Copula::antimonotone(), Copula::independent(), Copula::diamond()}) {
    const auto p = to_plan(cop, mu, nu);
    const double d = qcost_exact(p, aug) - qcost_exact(p, base);
    if (first) shift = d;
    first = false;
    CHECK(d == doctest::Approx(shift).epsilon(1e-12));
  }
}

TEST_CASE("grid submodularity certificates") {
  const std::vector<double> g{0, 0.5, 1, 2, 3.5};
  CHECK(is_submodular_on_grid(named_bivariate("negxy"), g));
  CHECK_FALSE(is_submodular_on_grid(named_bivariate("xy"), g));
  CHECK(is_submodular_on_grid(named_bivariate("absdiff"), g));
  CHECK(is_submodular_on_grid(named_bivariate("sqdiff"), g));
  CHECK(is_submodular_on_grid(named_bivariate("max"), g));
  CHECK_FALSE(is_submodular_on_grid(named_bivariate("min"), g));
  CHECK(is_submodular_on_grid(named_bivariate("sum"), g));
  CHECK_THROWS_AS(named_bivariate("nope"), Error);
}
