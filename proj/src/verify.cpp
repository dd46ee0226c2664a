#include "qot/verify.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <set>

#include "qot/errors.hpp"
#include "qot/estimator.hpp"
#include "qot/qp.hpp"
#include "qot/rng.hpp"
#include "qot/solver.hpp"

namespace qot {

namespace {

std::string num(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// FNV-1a, so a check's seed depends on its id and not on its position in a suite.
std::uint64_t id_hash(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

std::vector<double> to_vec(std::span<const double> s) { return {s.begin(), s.end()}; }

double lookup(const std::vector<std::pair<std::string, double>>& vals, const std::string& key) {
  for (const auto& [k, v] : vals)
    if (k == key) return v;
  fail(ErrorCode::BadParams, "no panel entry '" + key + "'");
}

std::string pair_desc(const Marginal& mu, const Marginal& nu, std::size_t n) {
  return "mu=" + mu.describe() + " nu=" + nu.describe() + " n_disc=" + std::to_string(n);
}

// Compares every target against the rest of the panel (and the grid oracle on
// tiny instances). All comparisons are recorded in the report.
bool panel_gate(CheckReport& r, const Marginal& mu_d, const Marginal& nu_d, const CostFn& c,
                const std::vector<std::string>& targets, const std::vector<Copula>& extra = {},
                bool maximize = false) {
  const double sign = maximize ? -1.0 : 1.0;
  const auto vals = evaluate_panel(mu_d, nu_d, c, extra);
  for (const auto& [name, v] : vals) r.add("obj_" + name, v);

  bool ok = true;
  for (const auto& t : targets) {
    const double tv = lookup(vals, t);
    double margin = std::numeric_limits<double>::infinity();
    for (const auto& [name, v] : vals)
      if (name != t) margin = std::min(margin, sign * (v - tv));
    r.add("margin_" + t, margin);
    if (margin < -kPanelTol) ok = false;
  }

  const std::size_t dim = free_dimension(mu_d, nu_d);
  if (dim >= 1 && dim <= kMaxGridDim) {
    CostFn cg = c;
    if (maximize) cg.eval = [e = c.eval](double x, double y, double xp, double yp) { return -e(x, y, xp, yp); };
    const auto g = grid_search(mu_d, nu_d, cg, kGridStep);
    const double grid_opt = sign * g.best.objective;
    r.add("grid_opt", grid_opt);
    r.add("grid_tol", g.tolerance());
    for (const auto& t : targets)
      if (sign * (lookup(vals, t) - grid_opt) > g.tolerance() + kPanelTol) ok = false;
  }
  return ok;
}

std::vector<double> sorted_distances(const std::vector<double>& pts, std::size_t cap = 60) {
  std::set<double> d;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t k = i; k < pts.size(); ++k) d.insert(std::abs(pts[i] - pts[k]));
  std::vector<double> all(d.begin(), d.end());
  if (all.size() <= cap) return all;
  std::vector<double> out;
  for (std::size_t k = 0; k < cap; ++k) out.push_back(all[k * (all.size() - 1) / (cap - 1)]);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Slope a of y = a*x + b between two discrete marginals with matching masses,
// if there is one.
std::optional<double> affine_slope(const Marginal& mu_d, const Marginal& nu_d) {
  const auto xs = to_vec(mu_d.points()), ys = to_vec(nu_d.points());
  const auto wx = to_vec(mu_d.weights()), wy = to_vec(nu_d.weights());
  const std::size_t n = xs.size();
  if (n < 2 || ys.size() != n) return std::nullopt;
  const double scale = std::max({1.0, std::abs(xs.front()), std::abs(xs.back()), std::abs(ys.front()),
                                 std::abs(ys.back())});
  for (int dir : {1, -1}) {
    auto y_at = [&](std::size_t i) { return dir > 0 ? ys[i] : ys[n - 1 - i]; };
    auto w_at = [&](std::size_t i) { return dir > 0 ? wy[i] : wy[n - 1 - i]; };
    const double a = (y_at(n - 1) - y_at(0)) / (xs[n - 1] - xs[0]);
    const double b = y_at(0) - a * xs[0];
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i)
      ok = std::abs(y_at(i) - (a * xs[i] + b)) <= 1e-9 * scale && std::abs(w_at(i) - wx[i]) <= 1e-12;
    if (ok) return a;
  }
  return std::nullopt;
}

Marginal point_mass(double x) { return Marginal::discrete({x}, {1.0}); }

}  // namespace

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::HypothesisViolated: return "hypothesis_violated";
  }
  return "fail";
}

double CheckReport::detail(const std::string& key) const { return lookup(details, key); }

std::vector<Copula> coupling_panel() {
  return {Copula::comonotone(), Copula::antimonotone(), Copula::independent(), Copula::x(0.25),
          Copula::x(0.5),       Copula::x(0.75),        Copula::v(),           Copula::diamond()};
}

std::vector<std::pair<std::string, double>> evaluate_panel(const Marginal& mu_d, const Marginal& nu_d,
                                                           const CostFn& c, const std::vector<Copula>& extra) {
  auto panel = coupling_panel();
  panel.insert(panel.end(), extra.begin(), extra.end());
  std::vector<std::pair<std::string, double>> out;
  for (const auto& cop : panel) out.emplace_back(cop.name(), qcost_exact(to_plan(cop, mu_d, nu_d), c));
  return out;
}

Marginal as_discrete(const Marginal& m, std::size_t n) { return m.is_discrete() ? m : discretize(m, n); }

Marginal random_discrete_marginal(std::size_t n, std::uint64_t seed) {
  if (n == 0) fail(ErrorCode::BadParams, "need at least one atom");
  Rng rng(seed);
  std::vector<double> pts, ws;
  double x = 4.0 * rng.uniform() - 2.0;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    pts.push_back(x);
    x += 0.05 + rng.uniform();
    ws.push_back(0.05 + rng.uniform());
    total += ws.back();
  }
  for (auto& w : ws) w /= total;
  return Marginal::discrete(std::move(pts), std::move(ws));
}

CheckReport check_diamond_rectangular(const Marginal& mu, const Marginal& nu, std::size_t n_disc,
                                      const CostFn& c) {
  CheckReport r;
  r.check_id = "diamond_rectangular";
  r.instance = pair_desc(mu, nu, n_disc) + " cost=" + c.describe();
  const Marginal mu_d = as_discrete(mu, n_disc), nu_d = as_discrete(nu, n_disc);
  r.status = panel_gate(r, mu_d, nu_d, c, {"dia"}) ? CheckStatus::Pass : CheckStatus::Fail;
  return r;
}

CheckReport check_diamond_ranking(const Marginal& mu, const Marginal& nu, std::size_t n_disc) {
  CheckReport r;
  r.check_id = "diamond_ranking";
  const CostFn c = catalog("ineq");
  r.instance = pair_desc(mu, nu, n_disc) + " cost=" + c.describe();
  const auto vals = evaluate_panel(as_discrete(mu, n_disc), as_discrete(nu, n_disc), c);
  for (const auto& [name, v] : vals) r.add("obj_" + name, v);
  const double dia = lookup(vals, "dia"), ind = lookup(vals, "ind"), x5 = lookup(vals, "x0.5");
  const double com = lookup(vals, "com"), ant = lookup(vals, "ant");
  r.add("com_ant_gap", std::abs(com - ant));
  r.status = dia < ind && ind < x5 && x5 < std::min(com, ant) ? CheckStatus::Pass : CheckStatus::Fail;
  return r;
}

CheckReport check_comonotone_submodular(const Marginal& mu, const Marginal& nu, const CostFn& c,
                                        std::size_t n_disc, CopulaKind expected, bool maximize) {
  if (expected != CopulaKind::Comonotone && expected != CopulaKind::Antimonotone)
    fail(ErrorCode::BadParams, "expected coupling must be comonotone or antimonotone");
  CheckReport r;
  const bool com = expected == CopulaKind::Comonotone;
  r.check_id = std::string(com ? "comonotone" : "antimonotone") + (maximize ? "_maximizer" : "_minimizer");
  r.instance = pair_desc(mu, nu, n_disc) + " cost=" + c.describe();
  const Marginal mu_d = as_discrete(mu, n_disc), nu_d = as_discrete(nu, n_disc);
  const auto xs = to_vec(mu_d.points()), ys = to_vec(nu_d.points());

  // Submodular in (x,y) for every fixed (x',y'), and in (x',y') for every (x,y).
  const double s = (com ? 1.0 : -1.0) * (maximize ? -1.0 : 1.0);
  bool hyp = true;
  if (xs.size() >= 2 && ys.size() >= 2) {
    for (double xp : xs)
      for (double yp : ys) {
        if (!hyp) break;
        hyp = is_submodular_on_grid([&](double x, double y) { return s * c(x, y, xp, yp); }, xs, ys) &&
              is_submodular_on_grid([&](double x, double y) { return s * c(xp, yp, x, y); }, xs, ys);
      }
  }
  r.add("hypothesis_ok", hyp ? 1.0 : 0.0);
  if (!hyp) {
    r.status = CheckStatus::HypothesisViolated;
    r.note = "cost fails the grid modularity certificate";
    return r;
  }
  r.status = panel_gate(r, mu_d, nu_d, c, {com ? "com" : "ant"}, {}, maximize) ? CheckStatus::Pass
                                                                                 : CheckStatus::Fail;
  return r;
}

CheckReport check_gw_location_scale(const Marginal& mu, double a, double b, const std::string& h_name,
                                    const Bivariate& h, std::size_t n_disc) {
  if (a == 0.0 || !std::isfinite(a) || !std::isfinite(b)) fail(ErrorCode::BadParams, "need finite a != 0");
  CheckReport r;
  r.check_id = "gw_location_scale";
  const Marginal mu_d = as_discrete(mu, n_disc);
  const Marginal nu_d = affine_image(mu_d, a, b);
  r.instance = "mu=" + mu.describe() + " nu=" + num(a) + "*X+" + num(b) + " n_disc=" + std::to_string(n_disc) +
               " h=" + h_name;
  const auto dx = sorted_distances(to_vec(mu_d.points()));
  const auto dy = sorted_distances(to_vec(nu_d.points()));
  const bool hyp = dx.size() < 2 || dy.size() < 2 || is_submodular_on_grid(h, dx, dy);
  r.add("hypothesis_ok", hyp ? 1.0 : 0.0);
  if (!hyp) {
    r.status = CheckStatus::HypothesisViolated;
    r.note = "h is not submodular on the distance grid";
    return r;
  }
  const CostFn c = gw_type_cost("gw:" + h_name, h);
  const bool sym = is_symmetric(mu).symmetric;
  r.add("mu_symmetric", sym ? 1.0 : 0.0);
  std::vector<std::string> targets{a > 0 ? "com" : "ant"};
  if (sym) targets = {"com", "ant"};
  bool ok = panel_gate(r, mu_d, nu_d, c, targets);
  if (sym) {
    const double gap = std::abs(r.detail("obj_com") - r.detail("obj_ant"));
    r.add("com_ant_gap", gap);
    ok = ok && gap <= 1e-9;
  }
  r.status = ok ? CheckStatus::Pass : CheckStatus::Fail;
  return r;
}

CheckReport check_v_transport(const Marginal& nu, const std::string& f_name,
                              const std::function<double(double)>& f, const std::string& g_name,
                              const Bivariate& g, std::size_t n_disc) {
  CheckReport r;
  r.check_id = "v_transport";
  const Marginal mu = Marginal::uniform(0.0, 1.0);
  r.instance = pair_desc(mu, nu, n_disc) + " f=" + f_name + " g=" + g_name;
  const Marginal mu_d = discretize(mu, n_disc), nu_d = as_discrete(nu, n_disc);
  const auto ys = to_vec(nu_d.points());

  bool hyp = true;
  const auto dx = sorted_distances(to_vec(mu_d.points()), 1000);
  for (std::size_t k = 0; k < dx.size() && hyp; ++k)
    hyp = f(dx[k]) >= -1e-12 && (k == 0 || f(dx[k]) >= f(dx[k - 1]) - 1e-12);
  for (std::size_t i = 0; i < ys.size() && hyp; ++i)
    for (std::size_t k = 0; k < ys.size() && hyp; ++k) {
      const double v = g(ys[i], ys[k]);
      hyp = v >= -1e-12 && (i == 0 || v >= g(ys[i - 1], ys[k]) - 1e-12) &&
            (k == 0 || v >= g(ys[i], ys[k - 1]) - 1e-12);
    }
  if (hyp && ys.size() >= 2)
    hyp = is_submodular_on_grid([&](double y, double yp) { return -g(y, yp); }, ys, ys);
  r.add("hypothesis_ok", hyp ? 1.0 : 0.0);
  if (!hyp) {
    r.status = CheckStatus::HypothesisViolated;
    r.note = "needs f >= 0 increasing and g >= 0 increasing supermodular";
    return r;
  }
  CostFn c;
  c.id = "vcost:" + f_name + "*" + g_name;
  c.type_xx = true;
  c.eval = [f, g](double x, double y, double xp, double yp) { return f(std::abs(x - xp)) * g(y, yp); };
  r.status = panel_gate(r, mu_d, nu_d, c, {"vinv"}, {Copula::v_inverted()}) ? CheckStatus::Pass
                                                                             : CheckStatus::Fail;
  return r;
}

CheckReport check_diamond_kernel(const Marginal& mu, const Marginal& nu, const KernelSpec& kernel,
                                 std::size_t n_disc) {
  if (!is_symmetric(mu).symmetric || !is_symmetric(nu).symmetric)
    fail(ErrorCode::NotSymmetric, "diamond kernel check needs symmetric marginals");
  CostFn c;
  std::function<double(double)> cond;  // sign of phi'(u) + 2u phi''(u)
  const double a = kernel.a, b = kernel.b;
  switch (kernel.kind) {
    case KernelKind::Exp:
      c = catalog("gauss", {{"alpha", a}});
      cond = [a](double u) { return -a + 2.0 * a * a * u; };
      break;
    case KernelKind::Power:
      c = catalog("powk", {{"beta", a}, {"gamma", b}});
      cond = [a, b](double u) { return 2.0 * u * (b + 1.0) - (a + u); };
      break;
    case KernelKind::StretchedExp:
      if (!(b > 0.5 && b < 1.0)) fail(ErrorCode::BadParams, "stretched exponential needs p in (1/2, 1)");
      c = catalog("sexp", {{"alpha", a}, {"p", b}});
      cond = [a, b](double u) { return 1.0 + 2.0 * a * b * std::pow(u, b) - 2.0 * b; };
      break;
  }
  CheckReport r;
  r.check_id = "diamond_kernel";
  r.instance = pair_desc(mu, nu, n_disc) + " cost=" + c.describe();
  const Marginal mu_d = as_discrete(mu, n_disc), nu_d = as_discrete(nu, n_disc);

  double worst = -std::numeric_limits<double>::infinity();
  for (const auto* m : {&mu_d, &nu_d})
    for (double d : sorted_distances(to_vec(m->points()), 1000)) worst = std::max(worst, cond(d * d));
  r.add("kernel_condition_max", worst);
  if (worst > 1e-12) {
    r.status = CheckStatus::HypothesisViolated;
    r.note = "phi'(u) + 2u phi''(u) > 0 on some squared support difference";
    return r;
  }

  const QpForm qp = build_qp(mu_d, nu_d, c);
  const Certificate cert = convexity_certificate(qp);
  r.add("psd", cert.psd ? 1.0 : 0.0);
  r.add("min_eigenvalue", cert.min_eigenvalue);
  const auto fw = solve_frank_wolfe(qp, independent_plan(mu_d, nu_d), {.gap_tol = 1e-8, .max_iter = 10000, .certify = false});
  const double dia = qcost_exact(to_plan(Copula::diamond(), mu_d, nu_d), c);
  r.add("fw_objective", fw.objective);
  r.add("fw_iterations", static_cast<double>(fw.iterations));
  r.add("fw_gap", fw.gap);
  r.add("fw_minus_dia", fw.objective - dia);
  const bool panel_ok = panel_gate(r, mu_d, nu_d, c, {"dia"});
  r.status = cert.psd && std::abs(fw.objective - dia) <= 1e-6 && panel_ok ? CheckStatus::Pass : CheckStatus::Fail;
  return r;
}

CheckReport check_qrect_symmetric(const Marginal& mu, const Marginal& nu, double q, std::size_t n_disc,
                                  std::size_t restarts, std::uint64_t seed) {
  if (!(q > 0.0) || q > 2.0) fail(ErrorCode::BadParams, "q must lie in (0, 2]");
  const CostFn c = catalog("qrect", {{"q", q}});
  if (q == 1.0) {
    auto r = check_diamond_rectangular(mu, nu, n_disc, c);
    r.check_id = "qrect_symmetric";
    r.seed = seed;
    r.note = "q = 1 is the rectangular cost";
    return r;
  }
  if (!is_symmetric(mu).symmetric || !is_symmetric(nu).symmetric)
    fail(ErrorCode::NotSymmetric, "q-rectangular check needs symmetric marginals");
  CheckReport r;
  r.check_id = "qrect_symmetric";
  r.seed = seed;
  r.instance = pair_desc(mu, nu, n_disc) + " cost=" + c.describe() + " restarts=" + std::to_string(restarts);
  const Marginal mu_d = as_discrete(mu, n_disc), nu_d = as_discrete(nu, n_disc);
  bool ok = panel_gate(r, mu_d, nu_d, c, {"dia"});

  const auto wx = to_vec(mu_d.weights()), wy = to_vec(nu_d.weights());
  const std::size_t n = wx.size();
  const bool uniform = n == wy.size() && std::all_of(wx.begin(), wx.end(), [&](double w) {
                         return std::abs(w - 1.0 / static_cast<double>(n)) <= 1e-15;
                       }) && std::all_of(wy.begin(), wy.end(), [&](double w) {
                         return std::abs(w - 1.0 / static_cast<double>(n)) <= 1e-15;
                       });
  if (uniform && restarts > 0) {
    const auto pe = solve_pair_exchange_multi(to_vec(mu_d.points()), to_vec(nu_d.points()), c, restarts, seed);
    const double dia = r.detail("obj_dia");
    r.add("pair_exchange_best", pe.objective);
    r.add("dia_minus_pair_exchange", dia - pe.objective);
    ok = ok && dia <= pe.objective + 1e-12 * std::max(1.0, std::abs(pe.objective));
  } else {
    r.note = "pair exchange skipped: needs equal-size uniform supports";
  }
  r.status = ok ? CheckStatus::Pass : CheckStatus::Fail;
  return r;
}

CheckReport check_separability(const Marginal& mu_d, const Marginal& nu_d, const CostFn& c) {
  if (!mu_d.is_discrete() || !nu_d.is_discrete())
    fail(ErrorCode::InvalidMarginal, "separability check needs discrete marginals");
  CheckReport r;
  r.check_id = "separability";
  r.instance = "mu=" + mu_d.describe() + " nu=" + nu_d.describe() + " cost=" + c.describe();
  const auto xs = to_vec(mu_d.points()), ys = to_vec(nu_d.points());
  const auto wx = to_vec(mu_d.weights()), wy = to_vec(nu_d.weights());
  const std::size_t n = xs.size(), m = ys.size();

  Eigen::MatrixXd ct = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < m; ++l)
          s += 0.5 * (c(xs[i], ys[j], xs[k], ys[l]) + c(xs[k], ys[l], xs[i], ys[j])) * wx[k] * wy[l];
      ct(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = s;
    }
  if (!ct.allFinite()) fail(ErrorCode::NonFiniteCost, "marginal cost is not finite");

  double max_dd = 0.0;
  for (Eigen::Index i = 0; i < ct.rows(); ++i)
    for (Eigen::Index j = 0; j < ct.cols(); ++j)
      max_dd = std::max(max_dd, std::abs(ct(i, j) - ct(i, 0) - ct(0, j) + ct(0, 0)));
  // Least-squares test: residual after removing the best row + column fit.
  const Eigen::VectorXd rmean = ct.rowwise().mean();
  const Eigen::RowVectorXd cmean = ct.colwise().mean();
  const Eigen::MatrixXd resid =
      (ct.colwise() - rmean).rowwise() - cmean + Eigen::MatrixXd::Constant(ct.rows(), ct.cols(), ct.mean());
  const double max_resid = resid.cwiseAbs().maxCoeff();
  const bool separable = max_dd <= 1e-9;
  const bool agree = separable == (max_resid <= 1e-9);

  r.add("separable", separable ? 1.0 : 0.0);
  r.add("max_double_difference", max_dd);
  r.add("max_centered_residual", max_resid);
  r.add("ctilde_min", ct.minCoeff());
  r.add("ctilde_max", ct.maxCoeff());
  if (n * m <= kDefaultQpLimit) {
    const auto cert = convexity_certificate(build_qp(mu_d, nu_d, c));
    r.add("psd", cert.psd ? 1.0 : 0.0);
    r.add("min_eigenvalue", cert.min_eigenvalue);
  }
  r.note = "separability is necessary for the independent plan to be optimal; sufficient when psd";
  r.status = separable && agree ? CheckStatus::Pass : CheckStatus::Fail;
  return r;
}

CheckReport check_qreg_independent(const Marginal& mu_d, const Marginal& nu_d) {
  const CostFn c = qreg_cost(mu_d, nu_d);
  CheckReport r = check_separability(mu_d, nu_d, c);
  r.check_id = "qreg_independent";
  const bool separable = r.pass();
  const double flat = std::max(std::abs(r.detail("ctilde_max") - 1.0), std::abs(r.detail("ctilde_min") - 1.0));
  r.add("ctilde_minus_one", flat);
  const QpForm qp = build_qp(mu_d, nu_d, c);
  const auto fw = solve_frank_wolfe(qp, to_plan(Copula::comonotone(), mu_d, nu_d), {.gap_tol = 1e-10, .max_iter = 10000, .certify = true});
  const auto ind = independent_plan(mu_d, nu_d);
  const double ind_obj = qcost_exact(ind, c);
  r.add("ind_objective", ind_obj);
  r.add("fw_objective", fw.objective);
  r.add("fw_iterations", static_cast<double>(fw.iterations));
  r.add("fw_tv_to_ind", tv_distance(fw.plan, ind));
  const bool psd = fw.certificate && fw.certificate->psd;
  const bool ok = separable && flat <= 1e-9 && psd && std::abs(fw.objective - ind_obj) <= 1e-6 &&
                  ind_obj <= fw.objective + 1e-12;
  r.status = ok ? CheckStatus::Pass : CheckStatus::Fail;
  return r;
}

SparseInstance sparse_diagonal_instance() {
  CostFn c;
  c.id = "sparse_diagonal";
  c.type_xx = false;
  c.exchangeable = true;
  c.eval = [](double x, double y, double xp, double yp) {
    if (x != xp || y != yp) return 0.0;
    if (y == 0.0 || y == 2.0) return 1.0;
    if (y == 1.0) return -1.0;
    return 0.0;
  };
  return {Marginal::discrete({0.0, 1.0}, {0.5, 0.5}),
          Marginal::discrete({0.0, 1.0, 2.0, 3.0}, {0.25, 0.25, 0.25, 0.25}), c};
}

CheckReport check_sparse_minimizers(double h) {
  const auto inst = sparse_diagonal_instance();
  CheckReport r = check_separability(inst.mu, inst.nu, inst.cost);
  r.check_id = "sparse_diagonal_minimizers";
  const bool separable = r.pass();

  // Transition probabilities (1/4,0,1/4) and (1/4,1/2,1/4) out of x = 0.
  auto plan = [](double p, double q, double rr) {
    const double row0[4] = {p / 2, q / 2, rr / 2, 0.5 - (p + q + rr) / 2};
    const double col[4] = {0.25, 0.25, 0.25, 0.25};
    std::vector<double> mass;
    for (double v : row0) mass.push_back(v);
    for (int j = 0; j < 4; ++j) mass.push_back(col[j] - row0[j]);
    return mass;
  };
  const std::vector<std::vector<double>> expected{plan(0.25, 0.0, 0.25), plan(0.25, 0.5, 0.25)};

  const auto g = grid_search(inst.mu, inst.nu, inst.cost, h, true);
  auto close = [](const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a[k] - b[k]));
    return d <= 1e-3;
  };
  std::size_t matched_found = 0, matched_expected = 0;
  for (const auto& mplan : g.minimizers)
    if (std::any_of(expected.begin(), expected.end(), [&](const auto& e) { return close(mplan.mass(), e); }))
      ++matched_found;
  for (const auto& e : expected)
    if (std::any_of(g.minimizers.begin(), g.minimizers.end(), [&](const auto& mp) { return close(mp.mass(), e); }))
      ++matched_expected;
  r.add("grid_min", g.best.objective);
  r.add("grid_minimizers", static_cast<double>(g.minimizers.size()));
  r.add("minimizers_matching_expected", static_cast<double>(matched_found));
  r.add("expected_found", static_cast<double>(matched_expected));
  r.add("ind_objective", qcost_exact(independent_plan(inst.mu, inst.nu), inst.cost));
  r.instance += " h=" + num(h);
  const bool ok = separable && matched_found == g.minimizers.size() && matched_expected == expected.size();
  r.status = ok ? CheckStatus::Pass : CheckStatus::Fail;
  return r;
}

CheckReport gamma_sweep(const Marginal& mu, const Marginal& nu, std::vector<double> gammas,
                        const GammaSweepOptions& opt) {
  if (gammas.empty()) fail(ErrorCode::BadParams, "empty gamma list");
  for (double g : gammas)
    if (!(g > 0.0) || !std::isfinite(g)) fail(ErrorCode::BadParams, "gamma must be positive");
  std::sort(gammas.begin(), gammas.end());
  CheckReport r;
  r.check_id = "gamma_sweep";
  r.seed = opt.seed;
  r.instance = pair_desc(mu, nu, opt.n_disc) + " restarts=" + std::to_string(opt.restarts) +
               " blocks=" + std::to_string(opt.blocks) + " gammas=";
  for (std::size_t k = 0; k < gammas.size(); ++k) r.instance += (k ? "," : "") + num(gammas[k]);

  const Marginal mu_d = as_discrete(mu, opt.n_disc), nu_d = as_discrete(nu, opt.n_disc);
  const auto xs = to_vec(mu_d.points()), ys = to_vec(nu_d.points());

  if (nu_d.size() == 1) {
    bool ok = true;
    for (double g : gammas) {
      const auto vals = evaluate_panel(mu_d, nu_d, catalog("linexp", {{"gamma", g}}));
      double worst = 0.0;
      for (const auto& [name, v] : vals) worst = std::max(worst, std::abs(v));
      r.add("gamma=" + num(g) + ":max_abs_objective", worst);
      ok = ok && worst == 0.0;
    }
    r.note = "point mass nu: every plan costs zero";
    r.status = ok ? CheckStatus::Pass : CheckStatus::Fail;
    return r;
  }
  if (xs.size() != ys.size()) fail(ErrorCode::BadParams, "pair exchange needs equal-size supports");
  for (const auto* m : {&mu_d, &nu_d})
    for (double w : m->weights())
      if (std::abs(w - 1.0 / static_cast<double>(xs.size())) > 1e-15)
        fail(ErrorCode::BadParams, "pair exchange needs uniform weights");

  const auto dia = coarsen(to_plan(Copula::diamond(), mu_d, nu_d), opt.blocks, opt.blocks);
  const auto slope = affine_slope(mu_d, nu_d);
  const std::size_t n_ls = std::min<std::size_t>(opt.n_disc, 30);
  const Marginal mu_ls = as_discrete(mu, n_ls), nu_ls = as_discrete(nu, n_ls);
  const bool sym = is_symmetric(mu).symmetric;

  bool tv_up = true, eta_down = true, ls_ok = true;
  double prev_tv = -1.0, prev_eta = 2.0;
  for (std::size_t k = 0; k < gammas.size(); ++k) {
    const std::string key = "gamma=" + num(gammas[k]) + ":";
    const CostFn c = catalog("linexp", {{"gamma", gammas[k]}});
    const auto best = solve_pair_exchange_multi(xs, ys, c, opt.restarts, derive_seed(opt.seed, k), 100000, true);
    const auto coarse = coarsen(best.plan, opt.blocks, opt.blocks);
    const double tv = tv_distance(coarse, dia);
    const double eta = eta_association(coarse);
    r.add(key + "max_objective", best.objective);
    r.add(key + "tv_to_dia", tv);
    r.add(key + "eta", eta);
    if (!(tv > prev_tv)) tv_up = false;
    if (!(eta < prev_eta)) eta_down = false;
    prev_tv = tv;
    prev_eta = eta;

    if (slope) {
      CheckReport sub;
      std::vector<std::string> targets{*slope > 0 ? "com" : "ant"};
      if (sym) targets = {"com", "ant"};
      const bool ok = panel_gate(sub, mu_ls, nu_ls, c, targets);
      for (const auto& t : targets) r.add(key + "min_margin_" + t, sub.detail("margin_" + t));
      ls_ok = ls_ok && ok;
    }
  }
  r.add("tv_increasing", tv_up ? 1.0 : 0.0);
  r.add("eta_decreasing", eta_down ? 1.0 : 0.0);
  r.add("location_scale", slope ? 1.0 : 0.0);
  if (slope) r.add("location_scale_minimizer_ok", ls_ok ? 1.0 : 0.0);
  r.status = tv_up && eta_down && ls_ok ? CheckStatus::Pass : CheckStatus::Fail;
  return r;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"diamond", "submodular", "gw",           "vtransport",
                                              "kernel",  "qrect",      "separability", "gamma"};
  return names;
}

namespace {

// Gives the report an id-qualified name and the seed derived for it.
void stamp(CheckReport& r, const std::string& name, std::uint64_t seed) {
  r.check_id += "/" + name;
  r.seed = seed;
}

std::uint64_t seed_for(std::uint64_t seed, const std::string& name) { return derive_seed(seed, id_hash(name)); }

void suite_diamond(std::vector<CheckReport>& out, std::uint64_t seed) {
  const auto U = Marginal::uniform(0.0, 1.0);
  const auto N = Marginal::normal(0.0, 1.0);
  auto add = [&](CheckReport r, const std::string& name) {
    stamp(r, name, seed_for(seed, name));
    out.push_back(std::move(r));
  };
  add(check_diamond_rectangular(U, N), "uniform_normal");
  add(check_diamond_rectangular(Marginal::exponential(1.0), U), "exponential_uniform");
  add(check_diamond_rectangular(Marginal::bernoulli(0.5), Marginal::bernoulli(0.5)), "two_point_bernoulli");
  add(check_diamond_rectangular(point_mass(0.0), point_mass(1.0)), "point_masses");
  {
    const auto s = seed_for(seed, "random_small");
    add(check_diamond_rectangular(random_discrete_marginal(3, s), random_discrete_marginal(3, s + 1)),
        "random_small");
  }
  {
    const auto s = seed_for(seed, "random_large");
    add(check_diamond_rectangular(random_discrete_marginal(17, s), random_discrete_marginal(23, s + 1)),
        "random_large");
  }
  add(check_diamond_ranking(U, N), "ranking_uniform_normal");
}

void suite_submodular(std::vector<CheckReport>& out, std::uint64_t seed) {
  const auto U = Marginal::uniform(0.0, 1.0);
  const auto N = Marginal::normal(0.0, 1.0);
  const std::size_t n = 30;
  auto add = [&](CheckReport r, const std::string& name) {
    stamp(r, name, seed_for(seed, name));
    out.push_back(std::move(r));
  };
  add(check_comonotone_submodular(U, N, catalog("maxxy"), n, CopulaKind::Comonotone), "max_abs_diff_uniform_normal");
  add(check_comonotone_submodular(U, U, catalog("gini"), n, CopulaKind::Antimonotone), "abs_sum_diff_uniform");
  add(check_comonotone_submodular(U, Marginal::exponential(1.0), catalog("kendall"), n, CopulaKind::Comonotone,
                                  true),
      "kendall_maximizer");
  add(check_comonotone_submodular(Marginal::discrete({0.0, 1.0, 3.0}, {0.2, 0.5, 0.3}),
                                  Marginal::discrete({-1.0, 0.5, 2.0}, {0.4, 0.4, 0.2}), catalog("maxxy"), n,
                                  CopulaKind::Comonotone),
      "max_abs_diff_tiny");
}

void suite_gw(std::vector<CheckReport>& out, std::uint64_t seed) {
  auto add = [&](CheckReport r, const std::string& name) {
    stamp(r, name, seed_for(seed, name));
    out.push_back(std::move(r));
  };
  const Bivariate negprod = [](double u, double v) { return -u * v; };
  const Bivariate maxuv = [](double u, double v) { return std::max(u, v); };
  const auto E = Marginal::exponential(1.0);
  add(check_gw_location_scale(Marginal::normal(0.0, 1.0), 1.0, 0.0, "negprod", negprod), "negprod_normal");
  add(check_gw_location_scale(E, 1.0, 0.0, "max", maxuv), "max_exponential");
  add(check_gw_location_scale(E, -1.0, 0.0, "max", maxuv), "max_exponential_decreasing");
  add(check_gw_location_scale(Marginal::uniform(0.0, 1.0), 2.0, 1.0, "negprod", negprod), "negprod_uniform_scaled");
  add(check_gw_location_scale(Marginal::discrete({0.0, 1.0, 3.0}, {0.3, 0.3, 0.4}), 1.5, -1.0, "max", maxuv),
      "max_tiny");
}

void suite_vtransport(std::vector<CheckReport>& out, std::uint64_t seed) {
  auto add = [&](CheckReport r, const std::string& name) {
    stamp(r, name, seed_for(seed, name));
    out.push_back(std::move(r));
  };
  const auto U = Marginal::uniform(0.0, 1.0);
  const auto id = [](double u) { return u; };
  const auto one = [](double) { return 1.0; };
  const Bivariate cdf_prod = [U](double y, double yp) { return U.cdf(y) * U.cdf(yp); };
  add(check_v_transport(U, "u", id, "F(y)F(y')", cdf_prod), "linear_cdf_product");
  add(check_v_transport(U, "1", one, "F(y)F(y')", cdf_prod), "constant_f");
  const auto pm = point_mass(0.5);
  const Bivariate pm_prod = [pm](double y, double yp) { return pm.cdf(y) * pm.cdf(yp); };
  add(check_v_transport(pm, "u", id, "F(y)F(y')", pm_prod), "point_mass_nu");
  const auto E = Marginal::exponential(1.0);
  const Bivariate e_prod = [E](double y, double yp) { return E.cdf(y) * E.cdf(yp); };
  add(check_v_transport(E, "u^2", [](double u) { return u * u; }, "F(y)F(y')", e_prod), "square_exponential");
}

void suite_kernel(std::vector<CheckReport>& out, std::uint64_t seed) {
  auto add = [&](CheckReport r, const std::string& name) {
    stamp(r, name, seed_for(seed, name));
    out.push_back(std::move(r));
  };
  const auto H = Marginal::uniform(-0.5, 0.5);
  const auto W = Marginal::uniform(-1.0, 1.0);
  add(check_diamond_kernel(H, H, {KernelKind::Exp, 0.5, 0.0}), "gaussian_half_width");
  add(check_diamond_kernel(H, Marginal::discrete({-0.5, 0.0, 0.5}, {0.25, 0.5, 0.25}), {KernelKind::Power, 4.0, 1.0}),
      "power_half_width");
  add(check_diamond_kernel(W, W, {KernelKind::StretchedExp, 0.1, 0.75}), "stretched_exp_unit_width");
  add(check_diamond_kernel(Marginal::uniform(-2.0, 2.0), Marginal::uniform(-2.0, 2.0), {KernelKind::Exp, 5.0, 0.0}),
      "gaussian_wide_support");
}

void suite_qrect(std::vector<CheckReport>& out, std::uint64_t seed) {
  auto add = [&](const std::string& name, auto&& fn) {
    const auto s = seed_for(seed, name);
    CheckReport r = fn(s);
    stamp(r, name, s);
    out.push_back(std::move(r));
  };
  const auto W = Marginal::uniform(-1.0, 1.0);
  const auto N = Marginal::normal(0.0, 1.0);
  add("q2_uniform", [&](std::uint64_t s) { return check_qrect_symmetric(W, W, 2.0, 20, 50, s); });
  add("q1.5_normal", [&](std::uint64_t s) { return check_qrect_symmetric(N, N, 1.5, 20, 50, s); });
  add("q1_asymmetric", [&](std::uint64_t s) {
    return check_qrect_symmetric(Marginal::exponential(1.0), Marginal::uniform(0.0, 1.0), 1.0, 20, 50, s);
  });
}

void suite_separability(std::vector<CheckReport>& out, std::uint64_t seed) {
  auto add = [&](CheckReport r, const std::string& name) {
    stamp(r, name, seed_for(seed, name));
    out.push_back(std::move(r));
  };
  const auto B = Marginal::bernoulli(0.5);
  add(check_separability(B, B, catalog("rect")), "rectangular_two_point");
  add(check_sparse_minimizers(), "sparse_diagonal");
  add(check_qreg_independent(Marginal::discrete({0.0, 1.0, 2.0}, {0.2, 0.3, 0.5}),
                             Marginal::discrete({0.0, 1.0}, {0.4, 0.6})),
      "qreg");
}

void suite_gamma(std::vector<CheckReport>& out, std::uint64_t seed) {
  auto add = [&](const std::string& name, const Marginal& mu, const Marginal& nu) {
    GammaSweepOptions opt;
    opt.seed = seed_for(seed, name);
    CheckReport r = gamma_sweep(mu, nu, {0.3, 2.0, 6.0}, opt);
    stamp(r, name, opt.seed);
    out.push_back(std::move(r));
  };
  const auto U = Marginal::uniform(0.0, 1.0);
  add("uniform_uniform", U, U);
  add("uniform_scaled", U, Marginal::uniform(1.0, 3.0));
  add("point_mass_nu", U, point_mass(0.0));
}

}  // namespace

std::vector<CheckReport> run_suite(const std::string& suite, std::uint64_t seed) {
  std::vector<CheckReport> out;
  using Fn = void (*)(std::vector<CheckReport>&, std::uint64_t);
  const std::vector<std::pair<std::string, Fn>> table{
      {"diamond", suite_diamond}, {"submodular", suite_submodular},     {"gw", suite_gw},
      {"vtransport", suite_vtransport}, {"kernel", suite_kernel}, {"qrect", suite_qrect},
      {"separability", suite_separability}, {"gamma", suite_gamma}};
  bool found = false;
  for (const auto& [name, fn] : table)
    if (suite == "all" || suite == name) {
      fn(out, seed);
      found = true;
    }
  if (!found) fail(ErrorCode::BadParams, "unknown suite '" + suite + "'");
  return out;
}

}  // namespace qot
