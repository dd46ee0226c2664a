#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace qot {

enum class MarginalKind { Uniform, Normal, Exponential, Bernoulli, Discrete };

/// A probability measure on the real line, accessed through its cdf and left
/// quantile. Immutable once built; every factory validates its parameters.
///
/// Bernoulli(p) keeps its own kind for printing but is stored as atoms at 0
/// and 1 (atoms of zero mass are dropped), so all discrete code paths apply.
class Marginal {
 public:
  static Marginal uniform(double a, double b);
  static Marginal normal(double mean, double sd);
  static Marginal exponential(double rate);
  static Marginal bernoulli(double p);
  /// Points must be strictly increasing and weights nonnegative, summing to 1
  /// within 1e-12 (they are renormalised to sum exactly to 1).
  static Marginal discrete(std::vector<double> points, std::vector<double> weights);

  MarginalKind kind() const noexcept { return kind_; }
  bool is_discrete() const noexcept {
    return kind_ == MarginalKind::Discrete || kind_ == MarginalKind::Bernoulli;
  }

  /// Shape parameters: (a,b) for uniform, (mean,sd) for normal, (rate,0) for
  /// exponential, (p,0) for Bernoulli.
  double param1() const noexcept { return p1_; }
  double param2() const noexcept { return p2_; }

  /// Atoms and masses; empty for continuous kinds.
  std::span<const double> points() const noexcept { return points_; }
  std::span<const double> weights() const noexcept { return weights_; }
  /// Cumulative masses F(x_i), last entry exactly 1; empty for continuous kinds.
  std::span<const double> cumulative() const noexcept { return cumulative_; }
  std::size_t size() const noexcept { return points_.size(); }

  double cdf(double x) const;
  /// Left quantile inf{x : F(x) >= t}. Throws DomainError outside [0,1] and
  /// UnboundedError for t = 0 when the support is unbounded below.
  double quantile(double t) const;

  double mean() const;
  double second_moment() const;
  double variance() const;

  /// Compact spec string, e.g. "U(0,1)", "N(0,1)", "discrete[5]".
  std::string describe() const;

 private:
  Marginal() = default;
  void finalize_atoms();

  MarginalKind kind_ = MarginalKind::Discrete;
  double p1_ = 0.0;
  double p2_ = 0.0;
  std::vector<double> points_;
  std::vector<double> weights_;
  std::vector<double> cumulative_;
};

/// Standard normal quantile: Acklam's rational approximation (relative error
/// below 1.15e-9) refined by one Halley step against erfc, giving close to
/// full double precision.
double normal_quantile(double t);
double normal_cdf(double z);

/// Uniform weights 1/n on the midpoint quantiles Q((2i-1)/(2n)), i = 1..n.
/// Duplicate points are merged. Symmetric parametric kinds are mirrored
/// exactly about their centre.
Marginal discretize(const Marginal& m, std::size_t n);

/// Pushforward of a discrete marginal under x -> a*x + b (a != 0).
Marginal affine_image(const Marginal& m, double a, double b);

/// Inverse-transform sample, reproducible from `seed`.
std::vector<double> sample(const Marginal& m, std::size_t count, std::uint64_t seed);

struct Symmetry {
  bool symmetric = false;
  double center = 0.0;
};

/// Parametric kinds: sup over a grid of levels t of |Q(t) + Q(1-t) - 2*mean|
/// compared against `tol`. Discrete kinds: mirror check of atoms and masses up
/// to floating rounding (tol is ignored).
Symmetry is_symmetric(const Marginal& m, double tol = 1e-9);

}  // namespace qot
