#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qot/marginals.hpp"

namespace qot {

/// Copula identities for the closed-form couplings.
///
/// `VInverted` is the mirrored V-transport (Q_mu(U), Q_nu(1-|2U-1|)): large
/// values of the second coordinate sit at the centre of the first marginal.
enum class CopulaKind { Comonotone, Antimonotone, Independent, X, V, VInverted, Diamond };

struct Copula {
  CopulaKind kind = CopulaKind::Independent;
  double lambda = 1.0;  ///< mixing weight on the comonotone part, used by X only

  static Copula comonotone() { return {CopulaKind::Comonotone, 1.0}; }
  static Copula antimonotone() { return {CopulaKind::Antimonotone, 0.0}; }
  static Copula independent() { return {CopulaKind::Independent, 1.0}; }
  static Copula x(double lambda);
  static Copula v() { return {CopulaKind::V, 1.0}; }
  static Copula v_inverted() { return {CopulaKind::VInverted, 1.0}; }
  static Copula diamond() { return {CopulaKind::Diamond, 1.0}; }

  /// Short name: "com", "ant", "ind", "x0.5", "v", "vinv", "dia".
  std::string name() const;
};

/// Parses "com", "ant", "ind", "x:0.25", "v", "vinv", "dia" (long forms
/// "comonotone", "antimonotone", "independent", "diamond" also accepted).
Copula parse_copula(const std::string& text);

struct CouplingSpec {
  Copula copula;
  Marginal mu;
  Marginal nu;
};

/// a ⋄ b = a/2 + b/2 - 1/4.
inline double diamond_op(double a, double b) { return 0.5 * a + 0.5 * b - 0.25; }

/// Four-region cdf of the uniform law on |u-1/2| + |v-1/2| = 1/2.
double diamond_cdf(double u, double v);

double copula_cdf(const Copula& copula, double u, double v);

/// Draws (u,v) pairs from the copula. Auxiliary draws (diamond sign, X switch)
/// are interleaved with U on one stream so the seed fixes the output.
std::vector<std::pair<double, double>> sample_copula(const Copula& copula, std::size_t count,
                                                     std::uint64_t seed);

/// Pairs (Q_mu(U), Q_nu(V)) with (U,V) drawn from the copula.
std::vector<std::pair<double, double>> sample_coupling(const CouplingSpec& spec,
                                                       std::size_t count, std::uint64_t seed);

/// Dense N x M plan between two discrete supports, stored row-major.
class TransportPlan {
 public:
  TransportPlan(std::vector<double> xs, std::vector<double> ys, std::vector<double> mass);

  std::size_t rows() const noexcept { return xs_.size(); }
  std::size_t cols() const noexcept { return ys_.size(); }
  const std::vector<double>& xs() const noexcept { return xs_; }
  const std::vector<double>& ys() const noexcept { return ys_; }
  const std::vector<double>& mass() const noexcept { return mass_; }
  double operator()(std::size_t i, std::size_t j) const { return mass_[i * ys_.size() + j]; }

  std::vector<double> row_sums() const;
  std::vector<double> col_sums() const;

  /// Max deviation of row/column sums from the given marginal weights.
  double marginal_error(const Marginal& mu, const Marginal& nu) const;

  /// Entrywise affine combination a*this + b*other on identical supports.
  TransportPlan mix(double a, const TransportPlan& other, double b) const;

 private:
  std::vector<double> xs_;
  std::vector<double> ys_;
  std::vector<double> mass_;
};

/// Uniform plan mu (x) nu.
TransportPlan independent_plan(const Marginal& mu_d, const Marginal& nu_d);

/// Plan with mass[i][j] = rectangle increment of C(F_mu, F_nu). Entries below
/// zero from cancellation are clamped; a row whose sum drifts more than 1e-12
/// from its weight is rescaled.
TransportPlan to_plan(const Copula& copula, const Marginal& mu_d, const Marginal& nu_d);
TransportPlan to_plan(const CouplingSpec& spec);

/// Permutation plan on equal-size uniform supports: x_i -> y_{perm[i]}.
TransportPlan permutation_plan(const std::vector<double>& xs, const std::vector<double>& ys,
                               const std::vector<std::size_t>& perm);

/// Total variation distance 1/2 * sum |p - q| on a common grid.
double tv_distance(const TransportPlan& a, const TransportPlan& b);

/// Aggregates consecutive blocks of rows and columns (sizes ceil(N/k), ceil(M/k)).
/// Block supports are the mass-weighted means of the merged atoms.
TransportPlan coarsen(const TransportPlan& plan, std::size_t row_blocks, std::size_t col_blocks);

}  // namespace qot
