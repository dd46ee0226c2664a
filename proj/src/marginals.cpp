#include "qot/marginals.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>

#include "qot/errors.hpp"
#include "qot/rng.hpp"

namespace qot {

namespace {

std::string num(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_quantile(double t) {
  if (!(t >= 0.0 && t <= 1.0)) fail(ErrorCode::Domain, "normal quantile level outside [0,1]");
  if (t == 0.0) return -kInf;
  if (t == 1.0) return kInf;
  // Exact mirror for the upper half; 1 - t is exact there.
  if (t > 0.5) return -normal_quantile(1.0 - t);

  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double x;
  if (t < p_low) {
    const double q = std::sqrt(-2.0 * std::log(t));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else {
    const double q = t - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  // One Halley step.
  const double e = normal_cdf(x) - t;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

Marginal Marginal::uniform(double a, double b) {
  if (!(std::isfinite(a) && std::isfinite(b) && a < b))
    fail(ErrorCode::InvalidMarginal, "uniform requires finite a < b");
  Marginal m;
  m.kind_ = MarginalKind::Uniform;
  m.p1_ = a;
  m.p2_ = b;
  return m;
}

Marginal Marginal::normal(double mean, double sd) {
  if (!(std::isfinite(mean) && std::isfinite(sd) && sd > 0.0))
    fail(ErrorCode::InvalidMarginal, "normal requires sd > 0");
  Marginal m;
  m.kind_ = MarginalKind::Normal;
  m.p1_ = mean;
  m.p2_ = sd;
  return m;
}

Marginal Marginal::exponential(double rate) {
  if (!(std::isfinite(rate) && rate > 0.0))
    fail(ErrorCode::InvalidMarginal, "exponential requires rate > 0");
  Marginal m;
  m.kind_ = MarginalKind::Exponential;
  m.p1_ = rate;
  return m;
}

Marginal Marginal::bernoulli(double p) {
  if (!(p >= 0.0 && p <= 1.0)) fail(ErrorCode::InvalidMarginal, "bernoulli requires p in [0,1]");
  Marginal m;
  m.kind_ = MarginalKind::Bernoulli;
  m.p1_ = p;
  if (p < 1.0) {
    m.points_.push_back(0.0);
    m.weights_.push_back(1.0 - p);
  }
  if (p > 0.0) {
    m.points_.push_back(1.0);
    m.weights_.push_back(p);
  }
  m.finalize_atoms();
  return m;
}

Marginal Marginal::discrete(std::vector<double> points, std::vector<double> weights) {
  if (points.empty()) fail(ErrorCode::InvalidMarginal, "discrete marginal needs at least one atom");
  if (points.size() != weights.size())
    fail(ErrorCode::InvalidMarginal, "points and weights differ in length");
  double total = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!std::isfinite(points[i])) fail(ErrorCode::InvalidMarginal, "non-finite atom");
    if (i > 0 && !(points[i] > points[i - 1]))
      fail(ErrorCode::InvalidMarginal, "atoms must be strictly increasing");
    if (!(weights[i] >= 0.0)) fail(ErrorCode::InvalidMarginal, "negative weight");
    total += weights[i];
  }
  if (std::abs(total - 1.0) > 1e-12)
    fail(ErrorCode::InvalidMarginal, "weights sum to " + num(total) + ", expected 1");
  Marginal m;
  m.kind_ = MarginalKind::Discrete;
  m.points_ = std::move(points);
  m.weights_ = std::move(weights);
  for (double& w : m.weights_) w /= total;
  m.finalize_atoms();
  return m;
}

void Marginal::finalize_atoms() {
  cumulative_.resize(weights_.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    acc += weights_[i];
    cumulative_[i] = acc;
  }
  if (!cumulative_.empty()) cumulative_.back() = 1.0;
}

double Marginal::cdf(double x) const {
  switch (kind_) {
    case MarginalKind::Uniform:
      if (x <= p1_) return 0.0;
      if (x >= p2_) return 1.0;
      return (x - p1_) / (p2_ - p1_);
    case MarginalKind::Normal:
      return normal_cdf((x - p1_) / p2_);
    case MarginalKind::Exponential:
      return x <= 0.0 ? 0.0 : -std::expm1(-p1_ * x);
    case MarginalKind::Bernoulli:
    case MarginalKind::Discrete: {
      auto it = std::upper_bound(points_.begin(), points_.end(), x);
      if (it == points_.begin()) return 0.0;
      return cumulative_[static_cast<std::size_t>(it - points_.begin()) - 1];
    }
  }
  return 0.0;
}

double Marginal::quantile(double t) const {
  if (!(t >= 0.0 && t <= 1.0)) fail(ErrorCode::Domain, "quantile level outside [0,1]");
  switch (kind_) {
    case MarginalKind::Uniform:
      if (t == 1.0) return p2_;
      return p1_ + t * (p2_ - p1_);
    case MarginalKind::Normal:
      if (t == 0.0) fail(ErrorCode::Unbounded, "normal quantile at 0 is -infinity");
      return p1_ + p2_ * normal_quantile(t);
    case MarginalKind::Exponential:
      if (t == 1.0) return kInf;
      return -std::log1p(-t) / p1_;
    case MarginalKind::Bernoulli:
    case MarginalKind::Discrete: {
      if (t == 0.0) return points_.front();
      auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), t);
      if (it == cumulative_.end()) return points_.back();
      return points_[static_cast<std::size_t>(it - cumulative_.begin())];
    }
  }
  return 0.0;
}

double Marginal::mean() const {
  switch (kind_) {
    case MarginalKind::Uniform: return 0.5 * (p1_ + p2_);
    case MarginalKind::Normal: return p1_;
    case MarginalKind::Exponential: return 1.0 / p1_;
    default: {
      double s = 0.0;
      for (std::size_t i = 0; i < points_.size(); ++i) s += points_[i] * weights_[i];
      return s;
    }
  }
}

double Marginal::second_moment() const {
  switch (kind_) {
    case MarginalKind::Uniform: return (p1_ * p1_ + p1_ * p2_ + p2_ * p2_) / 3.0;
    case MarginalKind::Normal: return p1_ * p1_ + p2_ * p2_;
    case MarginalKind::Exponential: return 2.0 / (p1_ * p1_);
    default: {
      double s = 0.0;
      for (std::size_t i = 0; i < points_.size(); ++i) s += points_[i] * points_[i] * weights_[i];
      return s;
    }
  }
}

double Marginal::variance() const {
  const double m = mean();
  return second_moment() - m * m;
}

std::string Marginal::describe() const {
  switch (kind_) {
    case MarginalKind::Uniform: return "U(" + num(p1_) + "," + num(p2_) + ")";
    case MarginalKind::Normal: return "N(" + num(p1_) + "," + num(p2_) + ")";
    case MarginalKind::Exponential: return "Exp(" + num(p1_) + ")";
    case MarginalKind::Bernoulli: return "Bern(" + num(p1_) + ")";
    case MarginalKind::Discrete: return "discrete[" + std::to_string(points_.size()) + "]";
  }
  return "?";
}

Marginal discretize(const Marginal& m, std::size_t n) {
  if (n == 0) fail(ErrorCode::BadParams, "discretize needs n >= 1");
  std::vector<double> pts(n);
  const bool mirror =
      m.kind() == MarginalKind::Uniform || m.kind() == MarginalKind::Normal;
  const double center = m.mean();
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = n - 1 - i;
    if (mirror && k < i) {
      pts[i] = 2.0 * center - pts[k];
    } else {
      const double level = static_cast<double>(2 * i + 1) / static_cast<double>(2 * n);
      pts[i] = m.quantile(level);
    }
  }
  if (mirror && n % 2 == 1) pts[n / 2] = center;

  std::vector<double> points;
  std::vector<double> weights;
  const double w = 1.0 / static_cast<double>(n);
  for (double x : pts) {
    if (!points.empty() && x == points.back()) {
      weights.back() += w;
    } else {
      points.push_back(x);
      weights.push_back(w);
    }
  }
  return Marginal::discrete(std::move(points), std::move(weights));
}

Marginal affine_image(const Marginal& m, double a, double b) {
  if (!m.is_discrete()) fail(ErrorCode::InvalidMarginal, "affine_image needs a discrete marginal");
  if (a == 0.0 || !std::isfinite(a) || !std::isfinite(b))
    fail(ErrorCode::BadParams, "affine_image needs finite a != 0");
  const auto xs = m.points();
  const auto ws = m.weights();
  const std::size_t n = xs.size();
  std::vector<double> points(n), weights(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t src = a > 0 ? i : n - 1 - i;
    points[i] = a * xs[src] + b;
    weights[i] = ws[src];
  }
  return Marginal::discrete(std::move(points), std::move(weights));
}

std::vector<double> sample(const Marginal& m, std::size_t count, std::uint64_t seed) {
  std::vector<double> out(count);
  Rng rng(seed);
  for (double& x : out) x = m.quantile(rng.uniform());
  return out;
}

Symmetry is_symmetric(const Marginal& m, double tol) {
  if (m.is_discrete()) {
    const auto xs = m.points();
    const auto ws = m.weights();
    const std::size_t n = xs.size();
    const double center = 0.5 * (xs.front() + xs.back());
    double scale = 1.0;
    for (double x : xs) scale = std::max(scale, std::abs(x));
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t k = n - 1 - i;
      if (std::abs(xs[i] + xs[k] - 2.0 * center) > 1e-12 * scale) return {false, center};
      if (std::abs(ws[i] - ws[k]) > 1e-12) return {false, center};
    }
    return {true, center};
  }
  const double center = m.mean();
  double worst = 0.0;
  for (int k = 1; k < 1000; ++k) {
    const double t = k / 1000.0;
    worst = std::max(worst, std::abs(m.quantile(t) + m.quantile(1.0 - t) - 2.0 * center));
  }
  return {worst <= tol, center};
}

}  // namespace qot
