#include "qot/product_costs.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "qot/errors.hpp"

namespace qot {

namespace {

// X = loc + scale * Z for a standard member Z of the family.
struct LocScale {
  char family;
  double loc;
  double scale;
};

std::optional<LocScale> loc_scale(const Marginal& m) {
  switch (m.kind()) {
    case MarginalKind::Uniform: return LocScale{'U', m.param1(), m.param2() - m.param1()};
    case MarginalKind::Normal: return LocScale{'N', m.param1(), m.param2()};
    case MarginalKind::Exponential: return LocScale{'E', 0.0, 1.0 / m.param1()};
    default: return std::nullopt;
  }
}

struct StdMoments {
  double ez, ez2, anti;  // E Z, E Z^2, E[Z(t) Z(1-t)]
};

StdMoments std_moments(char family) {
  switch (family) {
    case 'U': return {0.5, 1.0 / 3.0, 1.0 / 6.0};
    case 'N': return {0.0, 1.0, -1.0};
    default: return {1.0, 2.0, 2.0 - std::numbers::pi * std::numbers::pi / 6.0};
  }
}

double open_unit(double t) { return std::clamp(t, 0x1.0p-60, 1.0 - 0x1.0p-53); }

// Integral over [0,1] of Q_mu(t) Q_nu(t) (or Q_nu(1-t) when `anti`), split at
// the jump levels of any discrete marginal.
double quantile_product(const Marginal& mu, const Marginal& nu, bool anti) {
  std::vector<double> cuts{0.0, 1.0};
  for (double f : mu.cumulative()) cuts.push_back(f);
  for (double g : nu.cumulative()) cuts.push_back(anti ? 1.0 - g : g);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  auto integrand = [&](double t) {
    t = open_unit(t);
    return mu.quantile(t) * nu.quantile(open_unit(anti ? 1.0 - t : t));
  };
  const bool both_discrete = mu.is_discrete() && nu.is_discrete();
  boost::math::quadrature::tanh_sinh<double> integrator;
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double a = cuts[k], b = cuts[k + 1];
    if (!(b > a)) continue;
    if (both_discrete)
      total += (b - a) * integrand(0.5 * (a + b));
    else
      total += integrator.integrate(integrand, a, b);
  }
  return total;
}

}  // namespace

MomentRange cross_moment_range(const Marginal& mu, const Marginal& nu) {
  const auto lx = loc_scale(mu);
  const auto ly = loc_scale(nu);
  if (lx && ly && lx->family == ly->family) {
    const auto z = std_moments(lx->family);
    const double base = lx->loc * ly->loc + (lx->loc * ly->scale + ly->loc * lx->scale) * z.ez;
    return {base + lx->scale * ly->scale * z.ez2, base + lx->scale * ly->scale * z.anti};
  }
  return {quantile_product(mu, nu, false), quantile_product(mu, nu, true)};
}

XSolution solve_quadratic_product(const Marginal& mu, const Marginal& nu, const QuadCoeffs& f,
                                  const QuadCoeffs& g, bool maximize) {
  const double ex = mu.mean(), ey = nu.mean();
  const double ex2 = mu.second_moment(), ey2 = nu.second_moment();
  const double cf = f.c0 + f.cx * ex + f.cy * ey + f.cxx * ex2 + f.cyy * ey2;
  const double cg = g.c0 + g.cx * ex + g.cy * ey + g.cxx * ex2 + g.cyy * ey2;
  auto h = [&](double s) { return (cf + f.cxy * s) * (cg + g.cxy * s); };

  const auto range = cross_moment_range(mu, nu);
  const double width = range.s_com - range.s_ant;
  if (!(width > 1e-14 * std::max(1.0, std::abs(range.s_com))))
    fail(ErrorCode::DegenerateMarginal, "comonotone and antimonotone cross moments coincide");

  const double sign = maximize ? -1.0 : 1.0;
  const double a = f.cxy * g.cxy;
  const double b = cf * g.cxy + cg * f.cxy;
  std::vector<double> candidates{range.s_com};
  if (sign * a > 0.0) {
    const double v = -b / (2.0 * a);
    if (v > range.s_ant && v < range.s_com) candidates.push_back(v);
  }
  candidates.push_back(range.s_ant);
  double best = candidates.front();
  for (double s : candidates)
    if (sign * h(s) < sign * h(best) - 1e-12 * std::max(1.0, std::abs(h(best)))) best = s;

  const double lambda =
      best == range.s_com ? 1.0 : best == range.s_ant ? 0.0 : (best - range.s_ant) / width;
  XSolution sol{.lambda = lambda,
                .s_star = best,
                .s_com = range.s_com,
                .s_ant = range.s_ant,
                .objective = h(best),
                .spec = CouplingSpec{Copula::x(lambda), mu, nu}};
  return sol;
}

SubmodularSolution solve_submodular_product(const Marginal& mu, const Marginal& nu, const Bivariate& f,
                                            double a1, double a2, std::size_t n_disc) {
  const Marginal mu_d = mu.is_discrete() ? mu : discretize(mu, n_disc);
  const Marginal nu_d = nu.is_discrete() ? nu : discretize(nu, n_disc);
  const std::vector<double> xs(mu_d.points().begin(), mu_d.points().end());
  const std::vector<double> ys(nu_d.points().begin(), nu_d.points().end());
  if (xs.size() >= 2 && ys.size() >= 2 && !is_submodular_on_grid(f, xs, ys))
    fail(ErrorCode::NotSubmodular, "f fails the grid submodularity certificate");

  auto expect = [&](const Copula& cop) {
    const auto plan = to_plan(cop, mu_d, nu_d);
    double s = 0.0;
    for (std::size_t i = 0; i < plan.rows(); ++i)
      for (std::size_t j = 0; j < plan.cols(); ++j)
        if (plan(i, j) > 0.0) s += plan(i, j) * f(xs[i], ys[j]);
    return s;
  };
  const double t_com = expect(Copula::comonotone());
  const double t_ant = expect(Copula::antimonotone());
  auto q = [&](double t) { return (t + a1) * (t + a2); };

  std::vector<double> candidates{t_com};
  const double v = -0.5 * (a1 + a2);
  if (v > t_com && v < t_ant) candidates.push_back(v);
  candidates.push_back(t_ant);
  double best = candidates.front();
  for (double t : candidates)
    if (q(t) < q(best) - 1e-12 * std::max(1.0, std::abs(q(best)))) best = t;

  const double width = t_ant - t_com;
  const double lambda = width > 1e-15 ? std::clamp((t_ant - best) / width, 0.0, 1.0) : 1.0;
  SubmodularSolution sol{.lambda = lambda,
                         .t_star = best,
                         .t_com = t_com,
                         .t_ant = t_ant,
                         .objective = q(best),
                         .spec = CouplingSpec{Copula::x(lambda), mu, nu}};
  return sol;
}

}  // namespace qot
