#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <numeric>

#include "qot/errors.hpp"
#include "qot/linear_ot.hpp"
#include "qot/oracle.hpp"
#include "qot/rng.hpp"

using namespace qot;

namespace {

double linear_value(const Eigen::MatrixXd& cost, const Eigen::MatrixXd& plan) { return (cost.array() * plan.array()).sum(); }

std::vector<double> random_weights(Rng& rng, std::size_t n) {
  std::vector<double> w(n);
  double s = 0.0;
  for (auto& v : w) s += (v = 0.05 + rng.uniform());
  for (auto& v : w) v /= s;
  return w;
}

}  // namespace

TEST_CASE("two by two by hand") {
  Eigen::MatrixXd c(2, 2);
  c << 0, 1, 1, 0;
  const auto p = exact_linear_ot(c, {0.7, 0.3}, {0.4, 0.6});
  CHECK(linear_value(c, p) == doctest::Approx(0.3));
  CHECK(p(0, 0) == doctest::Approx(0.4));
}

TEST_CASE("matches vertex enumeration on random 3 x 4 instances") {
  Rng rng(42);
  for (int t = 0; t < 30; ++t) {
    Eigen::MatrixXd c(3, 4);
    for (Eigen::Index i = 0; i < 3; ++i)
      for (Eigen::Index j = 0; j < 4; ++j) c(i, j) = 4 * rng.uniform() - 2;
    const auto mu = random_weights(rng, 3), nu = random_weights(rng, 4);
    const auto p = exact_linear_ot(c, mu, nu);
    CHECK(std::abs(linear_value(c, p) - vertex_enumerate_linear(c, mu, nu)) <= 1e-9);
    for (Eigen::Index i = 0; i < 3; ++i) CHECK(p.row(i).sum() == doctest::Approx(mu[static_cast<std::size_t>(i)]));
    for (Eigen::Index j = 0; j < 4; ++j) CHECK(p.col(j).sum() == doctest::Approx(nu[static_cast<std::size_t>(j)]));
    CHECK(p.minCoeff() >= 0.0);
  }
}

TEST_CASE("uniform square instances reduce to assignment") {
  Rng rng(7);
  const std::size_t n = 6;
  for (int t = 0; t < 10; ++t) {
    Eigen::MatrixXd c(n, n);
    for (Eigen::Index i = 0; i < c.rows(); ++i)
      for (Eigen::Index j = 0; j < c.cols(); ++j) c(i, j) = rng.uniform();
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    double best = 1e300;
    do {
      double v = 0.0;
      for (std::size_t i = 0; i < n; ++i) v += c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(perm[i]));
      best = std::min(best, v / n);
    } while (std::next_permutation(perm.begin(), perm.end()));
    const std::vector<double> w(n, 1.0 / n);
    CHECK(linear_value(c, exact_linear_ot(c, w, w)) == doctest::Approx(best).epsilon(1e-12));
  }
}

TEST_CASE("size mismatch") {
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(2, 2);
  CHECK_THROWS_AS(exact_linear_ot(c, {1.0}, {0.5, 0.5}), Error);
}
