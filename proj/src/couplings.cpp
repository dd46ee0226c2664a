#include "qot/couplings.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "qot/errors.hpp"
#include "qot/rng.hpp"

namespace qot {

namespace {

void check_unit(double u, double v) {
  if (!(u >= 0.0 && u <= 1.0 && v >= 0.0 && v <= 1.0))
    fail(ErrorCode::Domain, "copula argument outside the unit square");
}

// Keeps copula draws strictly inside (0,1) so unbounded quantiles stay finite.
double open_unit(double v) { return std::clamp(v, 0x1.0p-60, 1.0 - 0x1.0p-53); }

}  // namespace

Copula Copula::x(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) fail(ErrorCode::BadParams, "x-transport needs lambda in [0,1]");
  return {CopulaKind::X, lambda};
}

std::string Copula::name() const {
  switch (kind) {
    case CopulaKind::Comonotone: return "com";
    case CopulaKind::Antimonotone: return "ant";
    case CopulaKind::Independent: return "ind";
    case CopulaKind::X: {
      char buf[32];
      auto res = std::to_chars(buf, buf + sizeof buf, lambda);
      return "x" + std::string(buf, res.ptr);
    }
    case CopulaKind::V: return "v";
    case CopulaKind::VInverted: return "vinv";
    case CopulaKind::Diamond: return "dia";
  }
  return "?";
}

Copula parse_copula(const std::string& text) {
  if (text == "com" || text == "comonotone") return Copula::comonotone();
  if (text == "ant" || text == "antimonotone") return Copula::antimonotone();
  if (text == "ind" || text == "independent") return Copula::independent();
  if (text == "v") return Copula::v();
  if (text == "vinv") return Copula::v_inverted();
  if (text == "dia" || text == "diamond") return Copula::diamond();
  if (text.size() > 1 && text[0] == 'x') {
    std::string_view rest(text);
    rest.remove_prefix(rest.size() > 2 && text[1] == ':' ? 2 : 1);
    double lambda = 0.0;
    auto res = std::from_chars(rest.data(), rest.data() + rest.size(), lambda);
    if (res.ec == std::errc() && res.ptr == rest.data() + rest.size()) return Copula::x(lambda);
  }
  fail(ErrorCode::Parse, "unknown coupling '" + text + "'");
}

double diamond_cdf(double u, double v) {
  check_unit(u, v);
  const double d = diamond_op(u, v);
  const bool lo_u = u <= 0.5;
  const bool lo_v = v <= 0.5;
  if (lo_u && lo_v) return std::max(d, 0.0);
  if (!lo_u && lo_v) return std::min(d, v);
  if (lo_u && !lo_v) return std::min(d, u);
  return std::max(d, u + v - 1.0);
}

double copula_cdf(const Copula& copula, double u, double v) {
  check_unit(u, v);
  switch (copula.kind) {
    case CopulaKind::Comonotone: return std::min(u, v);
    case CopulaKind::Antimonotone: return std::max(u + v - 1.0, 0.0);
    case CopulaKind::Independent: return u * v;
    case CopulaKind::X:
      return copula.lambda * std::min(u, v) + (1.0 - copula.lambda) * std::max(u + v - 1.0, 0.0);
    case CopulaKind::V:
      // Lebesgue measure of [0,u] ∩ [(1-v)/2, (1+v)/2].
      return std::max(0.0, std::min(u, 0.5 * (1.0 + v)) - 0.5 * (1.0 - v));
    case CopulaKind::VInverted:
      // Lebesgue measure of [0,u] ∩ ([0,v/2] ∪ [1-v/2,1]).
      return std::min(u, 0.5 * v) + std::max(0.0, u - (1.0 - 0.5 * v));
    case CopulaKind::Diamond: return diamond_cdf(u, v);
  }
  return 0.0;
}

std::vector<std::pair<double, double>> sample_copula(const Copula& copula, std::size_t count,
                                                     std::uint64_t seed) {
  std::vector<std::pair<double, double>> out(count);
  Rng rng(seed);
  for (auto& [u, v] : out) {
    u = rng.uniform();
    switch (copula.kind) {
      case CopulaKind::Comonotone: v = u; break;
      case CopulaKind::Antimonotone: v = 1.0 - u; break;
      case CopulaKind::Independent: v = rng.uniform(); break;
      case CopulaKind::X: v = rng.bernoulli(copula.lambda) ? u : 1.0 - u; break;
      case CopulaKind::V: v = std::abs(2.0 * u - 1.0); break;
      case CopulaKind::VInverted: v = 1.0 - std::abs(2.0 * u - 1.0); break;
      case CopulaKind::Diamond: {
        const double s = rng.sign();
        v = 0.5 + s * (0.5 - std::abs(u - 0.5));
        break;
      }
    }
  }
  return out;
}

std::vector<std::pair<double, double>> sample_coupling(const CouplingSpec& spec,
                                                       std::size_t count, std::uint64_t seed) {
  auto uv = sample_copula(spec.copula, count, seed);
  for (auto& [u, v] : uv) {
    const double x = spec.mu.quantile(open_unit(u));
    const double y = spec.nu.quantile(open_unit(v));
    u = x;
    v = y;
  }
  return uv;
}

TransportPlan::TransportPlan(std::vector<double> xs, std::vector<double> ys,
                             std::vector<double> mass)
    : xs_(std::move(xs)), ys_(std::move(ys)), mass_(std::move(mass)) {
  if (xs_.empty() || ys_.empty()) fail(ErrorCode::InvalidMarginal, "plan needs nonempty supports");
  if (mass_.size() != xs_.size() * ys_.size())
    fail(ErrorCode::SizeMismatch, "plan mass has wrong size");
  for (double& m : mass_) {
    if (!std::isfinite(m) || m < -1e-12) fail(ErrorCode::InvalidMarginal, "plan entry negative or non-finite");
    if (m < 0.0) m = 0.0;
  }
}

std::vector<double> TransportPlan::row_sums() const {
  std::vector<double> out(rows(), 0.0);
  for (std::size_t i = 0; i < rows(); ++i)
    for (std::size_t j = 0; j < cols(); ++j) out[i] += (*this)(i, j);
  return out;
}

std::vector<double> TransportPlan::col_sums() const {
  std::vector<double> out(cols(), 0.0);
  for (std::size_t i = 0; i < rows(); ++i)
    for (std::size_t j = 0; j < cols(); ++j) out[j] += (*this)(i, j);
  return out;
}

double TransportPlan::marginal_error(const Marginal& mu, const Marginal& nu) const {
  if (mu.size() != rows() || nu.size() != cols())
    fail(ErrorCode::SizeMismatch, "marginals do not match plan shape");
  double err = 0.0;
  const auto r = row_sums();
  const auto c = col_sums();
  for (std::size_t i = 0; i < rows(); ++i) err = std::max(err, std::abs(r[i] - mu.weights()[i]));
  for (std::size_t j = 0; j < cols(); ++j) err = std::max(err, std::abs(c[j] - nu.weights()[j]));
  return err;
}

TransportPlan TransportPlan::mix(double a, const TransportPlan& other, double b) const {
  if (other.rows() != rows() || other.cols() != cols())
    fail(ErrorCode::SizeMismatch, "cannot mix plans of different shapes");
  std::vector<double> m(mass_.size());
  for (std::size_t k = 0; k < m.size(); ++k) m[k] = a * mass_[k] + b * other.mass_[k];
  return TransportPlan(xs_, ys_, std::move(m));
}

TransportPlan independent_plan(const Marginal& mu_d, const Marginal& nu_d) {
  if (!mu_d.is_discrete() || !nu_d.is_discrete())
    fail(ErrorCode::InvalidMarginal, "independent_plan needs discrete marginals");
  const std::size_t n = mu_d.size(), m = nu_d.size();
  std::vector<double> mass(n * m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) mass[i * m + j] = mu_d.weights()[i] * nu_d.weights()[j];
  return TransportPlan({mu_d.points().begin(), mu_d.points().end()},
                       {nu_d.points().begin(), nu_d.points().end()}, std::move(mass));
}

TransportPlan to_plan(const Copula& copula, const Marginal& mu_d, const Marginal& nu_d) {
  if (!mu_d.is_discrete() || !nu_d.is_discrete())
    fail(ErrorCode::InvalidMarginal, "to_plan needs discrete marginals");
  const std::size_t n = mu_d.size(), m = nu_d.size();
  const auto F = mu_d.cumulative();
  const auto G = nu_d.cumulative();
  // H[(i+1)*(m+1) + (j+1)] = C(F_i, G_j), with F_{-1} = G_{-1} = 0.
  std::vector<double> H((n + 1) * (m + 1), 0.0);
  for (std::size_t i = 0; i <= n; ++i)
    for (std::size_t j = 0; j <= m; ++j) {
      const double u = i == 0 ? 0.0 : F[i - 1];
      const double v = j == 0 ? 0.0 : G[j - 1];
      H[i * (m + 1) + j] = copula_cdf(copula, u, v);
    }
  std::vector<double> mass(n * m);
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      double inc = H[(i + 1) * (m + 1) + (j + 1)] - H[i * (m + 1) + (j + 1)] -
                   H[(i + 1) * (m + 1) + j] + H[i * (m + 1) + j];
      if (inc < 0.0) inc = 0.0;
      mass[i * m + j] = inc;
      row += inc;
    }
    const double target = mu_d.weights()[i];
    if (std::abs(row - target) > 1e-12 && row > 0.0)
      for (std::size_t j = 0; j < m; ++j) mass[i * m + j] *= target / row;
  }
  return TransportPlan({mu_d.points().begin(), mu_d.points().end()},
                       {nu_d.points().begin(), nu_d.points().end()}, std::move(mass));
}

TransportPlan to_plan(const CouplingSpec& spec) { return to_plan(spec.copula, spec.mu, spec.nu); }

TransportPlan permutation_plan(const std::vector<double>& xs, const std::vector<double>& ys,
                               const std::vector<std::size_t>& perm) {
  const std::size_t n = xs.size();
  if (ys.size() != n || perm.size() != n) fail(ErrorCode::SizeMismatch, "permutation plan sizes differ");
  std::vector<double> mass(n * n, 0.0);
  std::vector<bool> seen(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (perm[i] >= n || seen[perm[i]]) fail(ErrorCode::BadParams, "not a permutation");
    seen[perm[i]] = true;
    mass[i * n + perm[i]] = 1.0 / static_cast<double>(n);
  }
  return TransportPlan(xs, ys, std::move(mass));
}

double tv_distance(const TransportPlan& a, const TransportPlan& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    fail(ErrorCode::SizeMismatch, "tv_distance needs plans on a common grid");
  double s = 0.0;
  for (std::size_t k = 0; k < a.mass().size(); ++k) s += std::abs(a.mass()[k] - b.mass()[k]);
  return 0.5 * s;
}

TransportPlan coarsen(const TransportPlan& plan, std::size_t row_blocks, std::size_t col_blocks) {
  const std::size_t n = plan.rows(), m = plan.cols();
  row_blocks = std::clamp<std::size_t>(row_blocks, 1, n);
  col_blocks = std::clamp<std::size_t>(col_blocks, 1, m);
  auto block_of = [](std::size_t idx, std::size_t total, std::size_t blocks) {
    return idx * blocks / total;
  };
  std::vector<double> mass(row_blocks * col_blocks, 0.0);
  std::vector<double> xw(row_blocks, 0.0), xm(row_blocks, 0.0), yw(col_blocks, 0.0),
      ym(col_blocks, 0.0);
  const auto rs = plan.row_sums();
  const auto cs = plan.col_sums();
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t bi = block_of(i, n, row_blocks);
    xw[bi] += rs[i];
    xm[bi] += rs[i] * plan.xs()[i];
    for (std::size_t j = 0; j < m; ++j)
      mass[bi * col_blocks + block_of(j, m, col_blocks)] += plan(i, j);
  }
  for (std::size_t j = 0; j < m; ++j) {
    const std::size_t bj = block_of(j, m, col_blocks);
    yw[bj] += cs[j];
    ym[bj] += cs[j] * plan.ys()[j];
  }
  std::vector<double> xs(row_blocks), ys(col_blocks);
  for (std::size_t b = 0; b < row_blocks; ++b) xs[b] = xw[b] > 0 ? xm[b] / xw[b] : 0.0;
  for (std::size_t b = 0; b < col_blocks; ++b) ys[b] = yw[b] > 0 ? ym[b] / yw[b] : 0.0;
  return TransportPlan(std::move(xs), std::move(ys), std::move(mass));
}

}  // namespace qot
