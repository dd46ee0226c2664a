#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qot/costs.hpp"
#include "qot/couplings.hpp"
#include "qot/errors.hpp"
#include "qot/estimator.hpp"
#include "qot/qp.hpp"

using namespace qot;

TEST_CASE("quadratic form equals the direct double sum") {
  const auto mu = Marginal::discrete({0, 1, 2.5}, {0.2, 0.5, 0.3});
  const auto nu = Marginal::discrete({-1, 0, 1, 4}, {0.1, 0.2, 0.3, 0.4});
  for (const auto& id : {"rect", "ineq", "gauss", "kendall", "maxxy"}) {
    const auto c = catalog(id);
    const auto qp = build_qp(mu, nu, c);
    for (const auto& cop : {Copula::comonotone(), Copula::independent(), Copula::diamond(), Copula::v()}) {
      const auto plan = to_plan(cop, mu, nu);
      CHECK(qp.objective(vectorize(plan)) == doctest::Approx(qcost_exact(plan, c)).epsilon(1e-13));
    }
  }
}

TEST_CASE("row-major indices are distinct") {
  const auto mu = Marginal::discrete({0, 1, 2}, {0.2, 0.3, 0.5});
  const auto nu = Marginal::discrete({0, 1, 2, 3}, {0.25, 0.25, 0.25, 0.25});
  const auto qp = build_qp(mu, nu, catalog("rect"));
  std::vector<bool> seen(12, false);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      CHECK_FALSE(seen[qp.index(i, j)]);
      seen[qp.index(i, j)] = true;
    }
  const auto plan = to_plan(Copula::diamond(), mu, nu);
  const auto back = unvectorize(qp, vectorize(plan));
  CHECK(back.mass() == plan.mass());
}

TEST_CASE("convexity certificate") {
  const auto mu = discretize(Marginal::uniform(-0.5, 0.5), 8);
  CHECK(convexity_certificate(build_qp(mu, mu, catalog("gauss"))).psd);
  CHECK(convexity_certificate(build_qp(mu, mu, catalog("powk"))).psd);
  // The rectangular cost has zero diagonal blocks: never psd on two or more atoms.
  const auto b = Marginal::bernoulli(0.5);
  const auto cert = convexity_certificate(build_qp(b, b, catalog("rect")));
  CHECK_FALSE(cert.psd);
  CHECK(cert.min_eigenvalue < 0.0);
}

TEST_CASE("limits and non-finite entries") {
  const auto mu = discretize(Marginal::uniform(0, 1), 70);
  CHECK_THROWS_AS(build_qp(mu, mu, catalog("rect")), Error);
  const auto b = Marginal::bernoulli(0.5);
  CHECK_THROWS_AS(build_qp(b, b, catalog("gwneg")), Error);
}
