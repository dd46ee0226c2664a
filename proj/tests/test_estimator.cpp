#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "qot/costs.hpp"
#include "qot/couplings.hpp"
#include "qot/errors.hpp"
#include "qot/estimator.hpp"

using namespace qot;

namespace {

// Two-point plan with pi(1,1) = p/2.
TransportPlan bernoulli_plan(double p) {
  return TransportPlan({0, 1}, {0, 1}, {p / 2, (1 - p) / 2, (1 - p) / 2, p / 2});
}

}  // namespace

TEST_CASE("two-point family: objective p^2 - p + 1/2") {
  const auto c = catalog("rect");
  for (double p : {0.0, 0.25, 0.5, 0.75, 1.0}) CHECK(std::abs(qcost_exact(bernoulli_plan(p), c) - (p * p - p + 0.5)) <= 1e-12);
}

TEST_CASE("non-finite cost terms are reported") {
  const auto mu = Marginal::discrete({0, 1}, {0.5, 0.5});
  CHECK_THROWS_AS(qcost_exact(to_plan(Copula::independent(), mu, mu), catalog("gwneg")), Error);
}

TEST_CASE("exact values on uniform grids match brute-force sums") {
  const auto mu = discretize(Marginal::uniform(0, 1), 5);
  const auto p = to_plan(Copula::comonotone(), mu, mu);
  double brute = 0.0;
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t k = 0; k < 5; ++k) {
      const double d = 2 * std::abs(mu.points()[i] - mu.points()[k]);
      brute += d * d / 25.0;
    }
  CHECK(qcost_exact(p, catalog("ineq")) == doctest::Approx(brute).epsilon(1e-14));
}

TEST_CASE("Monte Carlo agrees with closed forms") {
  const auto U = Marginal::uniform(0, 1);
  const auto ineq = catalog("ineq");
  // Y = X: 4 E(X - X')^2 = 2/3; independent: 2/6 + 2 (1/3)^2 = 5/9.
  const auto com = qcost_mc({Copula::comonotone(), U, U}, ineq, 200000, 1);
  CHECK(std::abs(com.value - 2.0 / 3.0) <= 4 * com.std_error);
  CHECK(com.method == EstimateMethod::McPairs);
  const auto ind = qcost_mc({Copula::independent(), U, U}, ineq, 200000, 2);
  CHECK(std::abs(ind.value - 5.0 / 9.0) <= 4 * ind.std_error);
  const auto us = qcost_mc({Copula::independent(), U, U}, ineq, 3000, 3);
  CHECK(us.method == EstimateMethod::McUstat);
  CHECK(std::abs(us.value - 5.0 / 9.0) <= 0.05);
}

TEST_CASE("Monte Carlo is reproducible from the seed") {
  const auto N = Marginal::normal(0, 1);
  const auto a = qcost_mc({Copula::diamond(), N, N}, catalog("rect"), 20000, 9);
  const auto b = qcost_mc({Copula::diamond(), N, N}, catalog("rect"), 20000, 9);
  CHECK(a.value == b.value);
  CHECK(a.std_error == b.std_error);
  CHECK_THROWS_AS(qcost_mc({Copula::diamond(), N, N}, catalog("rect"), 20001, 9, EstimateMethod::McPairs), Error);
}

TEST_CASE("kendall tau") {
  const auto mu = discretize(Marginal::uniform(0, 1), 10);
  CHECK(kendall_tau(to_plan(Copula::comonotone(), mu, mu)) == doctest::Approx(0.9));
  CHECK(kendall_tau(to_plan(Copula::antimonotone(), mu, mu)) == doctest::Approx(-0.9));
  CHECK(std::abs(kendall_tau(to_plan(Copula::independent(), mu, mu))) <= 1e-12);
}

TEST_CASE("eta association") {
  const auto mu = discretize(Marginal::uniform(0, 1), 6);
  CHECK(eta_association(to_plan(Copula::comonotone(), mu, mu)) == doctest::Approx(1.0));
  CHECK(std::abs(eta_association(to_plan(Copula::independent(), mu, mu))) <= 1e-12);
  CHECK(eta_association(permutation_plan({0, 1, 2}, {0, 1, 2}, {1, 2, 0})) == doctest::Approx(1.0));
  // x = 0 -> y = 0; x = 1 -> y uniform on {0,1}.
  const TransportPlan p({0, 1}, {0, 1}, {0.5, 0.0, 0.25, 0.25});
  CHECK(std::abs(eta_association(p) - 1.0 / 3.0) <= 1e-15);
  CHECK_THROWS_AS(eta_association(TransportPlan({0, 1}, {3}, {0.5, 0.5})), Error);
}

TEST_CASE("gini objective") {
  const TransportPlan p({1, 3}, {1, 3}, {0.5, 0, 0, 0.5});
  // E|X+Y-X'-Y'| = 2 with prob 1/2 of different rows: 4 * 1/2 = 2; E X + E Y = 4.
  CHECK(gini_objective(p) == doctest::Approx(2.0 / 8.0));
  CHECK_THROWS_AS(gini_objective(TransportPlan({0}, {0}, {1.0})), Error);
}
