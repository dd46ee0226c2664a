#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <boost/math/distributions/normal.hpp>
#include <cmath>

#include "qot/errors.hpp"
#include "qot/marginals.hpp"

using namespace qot;

TEST_CASE("normal quantile agrees with boost to near machine precision") {
  const boost::math::normal_distribution<double> z(0.0, 1.0);
  for (double t : {1e-12, 1e-6, 0.001, 0.02425, 0.1, 0.3, 0.5, 0.7, 0.97575, 0.999, 1 - 1e-9}) {
    const double ref = boost::math::quantile(z, t);
    CHECK(std::abs(normal_quantile(t) - ref) <= 1e-12 * std::max(1.0, std::abs(ref)));
  }
  CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-14));
}

TEST_CASE("parametric quantiles and moments") {
  const auto u = Marginal::uniform(-1.0, 3.0);
  CHECK(u.quantile(0.25) == doctest::Approx(0.0));
  CHECK(u.cdf(2.0) == doctest::Approx(0.75));
  CHECK(u.mean() == doctest::Approx(1.0));
  CHECK(u.variance() == doctest::Approx(16.0 / 12.0));

  const auto e = Marginal::exponential(2.0);
  for (double t : {0.1, 0.5, 0.9}) CHECK(e.quantile(t) == doctest::Approx(-std::log1p(-t) / 2.0));
  CHECK(e.mean() == doctest::Approx(0.5));
  CHECK(e.second_moment() == doctest::Approx(0.5));

  const auto n = Marginal::normal(1.0, 2.0);
  CHECK(n.quantile(0.5) == doctest::Approx(1.0));
  CHECK(n.second_moment() == doctest::Approx(5.0));
}

TEST_CASE("left quantile of discrete marginals") {
  const auto d = Marginal::discrete({0.0, 1.0, 5.0}, {0.2, 0.3, 0.5});
  CHECK(d.quantile(0.0) == 0.0);
  CHECK(d.quantile(0.2) == 0.0);
  CHECK(d.quantile(0.2000001) == 1.0);
  CHECK(d.quantile(0.5) == 1.0);
  CHECK(d.quantile(1.0) == 5.0);
  CHECK(d.cdf(0.99) == doctest::Approx(0.2));
  CHECK(d.mean() == doctest::Approx(2.8));
}

TEST_CASE("bernoulli drops zero atoms") {
  CHECK(Marginal::bernoulli(0.5).size() == 2);
  CHECK(Marginal::bernoulli(1.0).size() == 1);
  CHECK(Marginal::bernoulli(0.0).points()[0] == 0.0);
}

TEST_CASE("invalid parameters are rejected") {
  CHECK_THROWS_AS(Marginal::uniform(1.0, 1.0), Error);
  CHECK_THROWS_AS(Marginal::normal(0.0, -1.0), Error);
  CHECK_THROWS_AS(Marginal::exponential(0.0), Error);
  CHECK_THROWS_AS(Marginal::bernoulli(1.5), Error);
  CHECK_THROWS_AS(Marginal::discrete({1.0, 0.0}, {0.5, 0.5}), Error);
  CHECK_THROWS_AS(Marginal::discrete({0.0, 1.0}, {0.5, 0.4}), Error);
  CHECK_THROWS_AS(Marginal::uniform(0, 1).quantile(1.5), Error);
  CHECK_THROWS_AS(Marginal::normal(0, 1).quantile(0.0), Error);
}

TEST_CASE("discretize uses midpoint levels and stays symmetric") {
  const auto u = discretize(Marginal::uniform(0.0, 1.0), 4);
  REQUIRE(u.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(u.points()[i] == doctest::Approx((2.0 * i + 1.0) / 8.0));
    CHECK(u.weights()[i] == doctest::Approx(0.25));
  }
  const auto n = discretize(Marginal::normal(0.0, 1.0), 7);
  for (std::size_t i = 0; i < 7; ++i) CHECK(n.points()[i] == -n.points()[6 - i]);
  CHECK(is_symmetric(n).symmetric);
  CHECK(is_symmetric(Marginal::normal(2.0, 1.0)).center == doctest::Approx(2.0));
  CHECK_FALSE(is_symmetric(Marginal::exponential(1.0)).symmetric);
  CHECK_FALSE(is_symmetric(Marginal::discrete({0, 1, 3}, {0.3, 0.4, 0.3})).symmetric);
}

TEST_CASE("discretizing a discrete marginal merges duplicate levels") {
  const auto d = discretize(Marginal::discrete({0.0, 1.0}, {0.75, 0.25}), 8);
  CHECK(d.size() == 2);
  CHECK(d.weights()[0] == doctest::Approx(0.75));
}

TEST_CASE("affine image reverses atoms for negative slopes") {
  const auto d = Marginal::discrete({0.0, 1.0, 3.0}, {0.2, 0.3, 0.5});
  const auto r = affine_image(d, -2.0, 1.0);
  REQUIRE(r.size() == 3);
  CHECK(r.points()[0] == -5.0);
  CHECK(r.weights()[0] == doctest::Approx(0.5));
  CHECK(r.points()[2] == 1.0);
}

TEST_CASE("sampling is reproducible and has the right mean") {
  const auto n = Marginal::normal(3.0, 1.0);
  const auto a = sample(n, 20000, 5), b = sample(n, 20000, 5);
  CHECK(a == b);
  double m = 0.0;
  for (double v : a) m += v;
  m /= static_cast<double>(a.size());
  CHECK(std::abs(m - 3.0) < 5.0 / std::sqrt(20000.0));
  CHECK(sample(n, 10, 6) != sample(n, 10, 5));
}
