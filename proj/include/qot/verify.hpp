#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qot/costs.hpp"
#include "qot/couplings.hpp"
#include "qot/oracle.hpp"

namespace qot {

enum class CheckStatus { Pass, Fail, HypothesisViolated };

std::string to_string(CheckStatus s);

struct CheckReport {
  std::string check_id;
  CheckStatus status = CheckStatus::Fail;
  std::vector<std::pair<std::string, double>> details;
  std::string instance;
  std::string note;
  std::uint64_t seed = 0;

  bool pass() const { return status == CheckStatus::Pass; }
  void add(const std::string& key, double value) { details.emplace_back(key, value); }
  /// Throws BadParams if the key is missing.
  double detail(const std::string& key) const;
};

/// {com, ant, ind, x0.25, x0.5, x0.75, v, dia}.
std::vector<Copula> coupling_panel();

/// Objective of every panel coupling (plus `extra`) on the discrete marginals.
std::vector<std::pair<std::string, double>> evaluate_panel(const Marginal& mu_d, const Marginal& nu_d,
                                                           const CostFn& c,
                                                           const std::vector<Copula>& extra = {});

/// Discrete marginals pass through; others are discretised with n points.
Marginal as_discrete(const Marginal& m, std::size_t n);

/// n atoms with random spacing and random positive masses, reproducible from seed.
Marginal random_discrete_marginal(std::size_t n, std::uint64_t seed);

inline constexpr double kPanelTol = 1e-9;
inline constexpr double kGridStep = 0.005;

CheckReport check_diamond_rectangular(const Marginal& mu, const Marginal& nu, std::size_t n_disc = 30,
                                      const CostFn& c = catalog("rect"));

/// Discretised ranking dia < ind < x0.5 < min(com, ant) for the inequality cost.
CheckReport check_diamond_ranking(const Marginal& mu, const Marginal& nu, std::size_t n_disc = 30);

/// `expected` is Comonotone (submodular hypothesis) or Antimonotone
/// (supermodular). With `maximize` the hypothesis applies to -c.
CheckReport check_comonotone_submodular(const Marginal& mu, const Marginal& nu, const CostFn& c,
                                        std::size_t n_disc, CopulaKind expected, bool maximize = false);

/// nu = law of a*X + b; cost h(|x-x'|, |y-y'|).
CheckReport check_gw_location_scale(const Marginal& mu, double a, double b, const std::string& h_name,
                                    const Bivariate& h, std::size_t n_disc = 30);

/// mu = U(0,1); cost f(|x-x'|) g(y,y'). Passes when the mirrored V plan
/// (vinv) is minimal on the panel; the plain V objective is reported too.
CheckReport check_v_transport(const Marginal& nu, const std::string& f_name,
                              const std::function<double(double)>& f, const std::string& g_name,
                              const Bivariate& g, std::size_t n_disc = 30);

enum class KernelKind { Exp, Power, StretchedExp };

struct KernelSpec {
  KernelKind kind = KernelKind::Exp;
  double a = 0.5;   ///< alpha (exp, stretched exp) or beta (power)
  double b = 1.0;   ///< gamma (power) or p (stretched exp)
};

/// Cost phi((x-x')^2) phi((y-y')^2). Reports hypothesis_violated when
/// phi'(u) + 2u phi''(u) <= 0 fails on some squared support difference.
CheckReport check_diamond_kernel(const Marginal& mu, const Marginal& nu, const KernelSpec& kernel,
                                 std::size_t n_disc = 20);

CheckReport check_qrect_symmetric(const Marginal& mu, const Marginal& nu, double q, std::size_t n_disc = 20,
                                  std::size_t restarts = 50, std::uint64_t seed = 0);

/// Passes when the symmetrised marginal cost c~(x,y) is separable.
CheckReport check_separability(const Marginal& mu_d, const Marginal& nu_d, const CostFn& c);

/// qreg cost: separable with constant c~, psd, and Frank-Wolfe started from the
/// comonotone plan reaches the independent objective.
CheckReport check_qreg_independent(const Marginal& mu_d, const Marginal& nu_d);

/// The separable 2x4 instance whose minimisers are not the independent plan.
struct SparseInstance {
  Marginal mu;
  Marginal nu;
  CostFn cost;
};
SparseInstance sparse_diagonal_instance();

/// Grid minimisers of the sparse instance against the two expected plans.
CheckReport check_sparse_minimizers(double h = kGridStep);

struct GammaSweepOptions {
  std::size_t n_disc = 50;
  std::size_t restarts = 10;
  std::size_t blocks = 10;
  std::uint64_t seed = 0;
};

/// Maximises the linexp cost for each gamma by multi-restart pair exchange and
/// checks that the coarsened maximiser drifts away from the diamond plan and
/// loses association as gamma grows. When nu is a location-scale image of mu
/// the comonotone/antimonotone minimiser property is also checked.
CheckReport gamma_sweep(const Marginal& mu, const Marginal& nu, std::vector<double> gammas,
                        const GammaSweepOptions& opt = {});

/// Suites: diamond, submodular, gw, vtransport, kernel, qrect, separability,
/// gamma, all.
std::vector<CheckReport> run_suite(const std::string& suite, std::uint64_t seed);
const std::vector<std::string>& suite_names();

}  // namespace qot
