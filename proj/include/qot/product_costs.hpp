#pragma once

#include <cstddef>

#include "qot/costs.hpp"
#include "qot/couplings.hpp"

namespace qot {

/// E[X Y] under the comonotone and antimonotone couplings of (mu, nu).
struct MomentRange {
  double s_com = 0.0;
  double s_ant = 0.0;
};

/// Closed forms when both marginals come from the same location-scale family,
/// exact sums for two discrete marginals, and tanh-sinh quadrature of the
/// quantile product otherwise.
MomentRange cross_moment_range(const Marginal& mu, const Marginal& nu);

struct XSolution {
  double lambda = 0.0;  ///< weight on the comonotone coupling
  double s_star = 0.0;
  double s_com = 0.0;
  double s_ant = 0.0;
  double objective = 0.0;
  CouplingSpec spec;
};

/// For c = f(x,y) g(x',y') with quadratic f and g the cost is
/// (C1 + a1 s)(C2 + a2 s) in s = E[XY]; minimise (or maximise) it over
/// [s_ant, s_com]. Ties go to the comonotone end.
XSolution solve_quadratic_product(const Marginal& mu, const Marginal& nu, const QuadCoeffs& f,
                                  const QuadCoeffs& g, bool maximize = false);

struct SubmodularSolution {
  double lambda = 0.0;
  double t_star = 0.0;
  double t_com = 0.0;
  double t_ant = 0.0;
  double objective = 0.0;
  CouplingSpec spec;
};

/// For c = (f(x,y)+a1)(f(x',y')+a2) with submodular f: t = E f ranges over
/// [t_com, t_ant] on the n_disc-point discretisations, and x(lambda) attains
/// the minimiser of (t+a1)(t+a2). NotSubmodular if the grid certificate fails.
SubmodularSolution solve_submodular_product(const Marginal& mu, const Marginal& nu, const Bivariate& f,
                                            double a1, double a2, std::size_t n_disc = 200);

}  // namespace qot
