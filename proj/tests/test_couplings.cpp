#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <functional>

#include "qot/couplings.hpp"
#include "qot/errors.hpp"

using namespace qot;

namespace {

// P(U <= u, g(U, s) <= v) by midpoint quadrature over U, averaging a fair sign s.
double cdf_by_quadrature(const std::function<double(double, double)>& g, double u, double v) {
  const int steps = 200000;
  double acc = 0.0;
  for (int k = 0; k < steps; ++k) {
    const double t = (k + 0.5) / steps;
    if (t > u) break;
    acc += 0.5 * ((g(t, 1.0) <= v) + (g(t, -1.0) <= v));
  }
  return acc / steps;
}

std::vector<Copula> all_kinds() {
  return {Copula::comonotone(), Copula::antimonotone(), Copula::independent(), Copula::x(0.3),
          Copula::v(),          Copula::v_inverted(),   Copula::diamond()};
}

}  // namespace

TEST_CASE("diamond operator") { CHECK(diamond_op(0.5, 0.5) == doctest::Approx(0.25)); }

TEST_CASE("copula cdfs match direct quadrature of their sampling maps") {
  const auto diamond = [](double t, double s) { return 0.5 + s * (0.5 - std::abs(t - 0.5)); };
  const auto v = [](double t, double) { return std::abs(2 * t - 1); };
  const auto vinv = [](double t, double) { return 1 - std::abs(2 * t - 1); };
  for (double u : {0.1, 0.3, 0.5, 0.62, 0.9})
    for (double w : {0.05, 0.25, 0.5, 0.7, 0.95}) {
      CHECK(copula_cdf(Copula::diamond(), u, w) == doctest::Approx(cdf_by_quadrature(diamond, u, w)).epsilon(1e-4));
      CHECK(copula_cdf(Copula::v(), u, w) == doctest::Approx(cdf_by_quadrature(v, u, w)).epsilon(1e-4));
      CHECK(copula_cdf(Copula::v_inverted(), u, w) == doctest::Approx(cdf_by_quadrature(vinv, u, w)).epsilon(1e-4));
      const double x = 0.3 * std::min(u, w) + 0.7 * std::max(u + w - 1, 0.0);
      CHECK(copula_cdf(Copula::x(0.3), u, w) == doctest::Approx(x));
    }
}

TEST_CASE("Frechet bounds and 2-increasingness on a 101 x 101 grid") {
  for (const auto& c : all_kinds()) {
    CAPTURE(c.name());
    double worst_bound = 0.0, worst_rect = 0.0;
    for (int i = 0; i <= 100; ++i)
      for (int j = 0; j <= 100; ++j) {
        const double u = i / 100.0, v = j / 100.0;
        const double f = copula_cdf(c, u, v);
        worst_bound = std::max({worst_bound, std::max(u + v - 1, 0.0) - f, f - std::min(u, v)});
        if (i > 0 && j > 0) {
          const double rect = f - copula_cdf(c, (i - 1) / 100.0, v) - copula_cdf(c, u, (j - 1) / 100.0) +
                              copula_cdf(c, (i - 1) / 100.0, (j - 1) / 100.0);
          worst_rect = std::max(worst_rect, -rect);
        }
      }
    CHECK(worst_bound <= 1e-12);
    CHECK(worst_rect <= 1e-12);
  }
}

TEST_CASE("samples land on the copula supports") {
  const auto d = sample_copula(Copula::diamond(), 2000, 3);
  for (auto [u, v] : d) CHECK(std::abs(std::abs(u - 0.5) + std::abs(v - 0.5) - 0.5) <= 1e-12);
  for (auto [u, v] : sample_copula(Copula::comonotone(), 100, 1)) CHECK(u == v);
  for (auto [u, v] : sample_copula(Copula::antimonotone(), 100, 1)) CHECK(u + v == doctest::Approx(1.0));
  for (auto [u, v] : sample_copula(Copula::v(), 100, 1)) CHECK(v == doctest::Approx(std::abs(2 * u - 1)));
  CHECK(sample_copula(Copula::diamond(), 50, 9) == sample_copula(Copula::diamond(), 50, 9));
}

TEST_CASE("diamond samples follow the copula cdf") {
  const auto d = sample_copula(Copula::diamond(), 200000, 17);
  double hit = 0;
  for (auto [u, v] : d) hit += (u <= 0.4 && v <= 0.7);
  const double p = copula_cdf(Copula::diamond(), 0.4, 0.7);
  CHECK(std::abs(hit / d.size() - p) < 4 * std::sqrt(p * (1 - p) / d.size()));
}

TEST_CASE("plans have exact marginals") {
  const auto mu = Marginal::discrete({0, 1, 2, 4}, {0.1, 0.2, 0.3, 0.4});
  const auto nu = Marginal::discrete({-1, 0, 3}, {0.5, 0.25, 0.25});
  for (const auto& c : all_kinds()) {
    CAPTURE(c.name());
    const auto p = to_plan(c, mu, nu);
    CHECK(p.marginal_error(mu, nu) <= 1e-12);
    for (double m : p.mass()) CHECK(m >= 0.0);
  }
}

TEST_CASE("x plan is the entrywise mixture") {
  const auto mu = discretize(Marginal::uniform(0, 1), 7);
  const auto nu = discretize(Marginal::normal(0, 1), 5);
  const auto mix = to_plan(Copula::comonotone(), mu, nu).mix(0.5, to_plan(Copula::antimonotone(), mu, nu), 0.5);
  const auto x = to_plan(Copula::x(0.5), mu, nu);
  for (std::size_t k = 0; k < x.mass().size(); ++k) CHECK(x.mass()[k] == doctest::Approx(mix.mass()[k]));
}

TEST_CASE("two-point bernoulli: diamond equals independent") {
  const auto b = Marginal::bernoulli(0.5);
  const auto d = to_plan(Copula::diamond(), b, b);
  for (double m : d.mass()) CHECK(m == doctest::Approx(0.25));
}

TEST_CASE("tv distance and coarsening") {
  const auto b = Marginal::bernoulli(0.5);
  CHECK(tv_distance(to_plan(Copula::comonotone(), b, b), to_plan(Copula::antimonotone(), b, b)) ==
        doctest::Approx(1.0));
  const auto mu = discretize(Marginal::uniform(0, 1), 10);
  const auto p = to_plan(Copula::diamond(), mu, mu);
  const auto c = coarsen(p, 5, 5);
  CHECK(c.rows() == 5);
  double total = 0.0;
  for (double m : c.mass()) total += m;
  CHECK(total == doctest::Approx(1.0));
  for (double r : c.row_sums()) CHECK(r == doctest::Approx(0.2));
  CHECK(c.xs()[0] == doctest::Approx(0.1));
}

TEST_CASE("permutation plans") {
  const auto p = permutation_plan({0, 1, 2}, {5, 6, 7}, {2, 0, 1});
  CHECK(p(0, 2) == doctest::Approx(1.0 / 3));
  CHECK(p(1, 0) == doctest::Approx(1.0 / 3));
  CHECK(p(0, 0) == 0.0);
}

TEST_CASE("copula names round trip") {
  for (const auto& c : all_kinds()) CHECK(parse_copula(c.name()).name() == c.name());
  CHECK(parse_copula("diamond").kind == CopulaKind::Diamond);
  CHECK(parse_copula("x:0.25").lambda == doctest::Approx(0.25));
  CHECK_THROWS_AS(parse_copula("zigzag"), Error);
  CHECK_THROWS_AS(parse_copula("x:1.5"), Error);
}
