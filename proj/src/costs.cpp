#include "qot/costs.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <set>

#include "qot/errors.hpp"

namespace qot {

namespace {

std::string num(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s, const std::string& context) {
  double v = 0.0;
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    fail(ErrorCode::Parse, "bad number '" + std::string(s) + "' in " + context);
  return v;
}

double sgn(double v) { return (v > 0) - (v < 0); }

struct Entry {
  std::vector<std::pair<std::string, double>> defaults;
};

const std::map<std::string, Entry>& entries() {
  static const std::map<std::string, Entry> table = {
      {"rect", {{}}},
      {"qrect", {{{"q", 1.0}}}},
      {"ineq", {{{"t1", 1.0}, {"t2", 1.0}}}},
      {"gw", {{{"p", 1.0}, {"q", 1.0}}}},
      {"kendall", {{}}},
      {"cov", {{}}},
      {"gini", {{}}},
      {"linexp", {{{"gamma", 1.0}}}},
      {"gauss", {{{"alpha", 0.5}}}},
      {"powk", {{{"beta", 4.0}, {"gamma", 1.0}}}},
      {"sexp", {{{"alpha", 0.1}, {"p", 0.75}}}},
      {"negprod", {{{"beta", 1.0}}}},
      {"gwneg", {{{"alpha", 0.25}}}},
      {"maxgw", {{}}},
      {"maxxy", {{}}},
  };
  return table;
}

void require(bool ok, const std::string& what) {
  if (!ok) fail(ErrorCode::BadParams, what);
}

std::string join_params(const std::vector<std::pair<std::string, double>>& ps) {
  std::string out;
  for (const auto& [k, v] : ps) {
    if (!out.empty()) out += ',';
    out += k + "=" + num(v);
  }
  return out;
}

std::string coeff_text(const QuadCoeffs& q) {
  return num(q.c0) + "/" + num(q.cx) + "/" + num(q.cy) + "/" + num(q.cxx) + "/" + num(q.cyy) +
         "/" + num(q.cxy);
}

QuadCoeffs parse_coeffs(std::string_view s) {
  double v[6];
  for (int k = 0; k < 6; ++k) {
    const auto slash = s.find('/');
    if ((slash == std::string_view::npos) != (k == 5))
      fail(ErrorCode::Parse, "quadprod coefficients need six '/'-separated numbers");
    v[k] = parse_double(s.substr(0, slash), "quadprod coefficients");
    if (slash != std::string_view::npos) s.remove_prefix(slash + 1);
  }
  return {v[0], v[1], v[2], v[3], v[4], v[5]};
}

}  // namespace

double CostFn::param(const std::string& name) const {
  for (const auto& [k, v] : params)
    if (k == name) return v;
  fail(ErrorCode::BadParams, "cost '" + id + "' has no parameter '" + name + "'");
}

std::string CostFn::describe() const {
  if (id == "quadprod" && f_coeffs && g_coeffs)
    return "quadprod:f=" + coeff_text(*f_coeffs) + ",g=" + coeff_text(*g_coeffs);
  if (params.empty()) return id;
  return id + ":" + join_params(params);
}

CostFn catalog(const std::string& id, const ParamMap& given) {
  const auto it = entries().find(id);
  if (it == entries().end()) fail(ErrorCode::UnknownCost, "unknown cost '" + id + "'");
  std::vector<std::pair<std::string, double>> ps = it->second.defaults;
  for (const auto& [k, v] : given) {
    auto slot = std::find_if(ps.begin(), ps.end(), [&](const auto& p) { return p.first == k; });
    if (slot == ps.end()) fail(ErrorCode::BadParams, "cost '" + id + "' has no parameter '" + k + "'");
    require(std::isfinite(v), "non-finite parameter '" + k + "'");
    slot->second = v;
  }
  auto get = [&](const char* k) {
    for (const auto& [n, v] : ps)
      if (n == k) return v;
    return 0.0;
  };

  CostFn c;
  c.id = id;
  c.params = ps;
  c.type_xx = true;
  c.exchangeable = true;
  if (id == "rect") {
    c.eval = [](double x, double y, double xp, double yp) { return std::abs((x - xp) * (y - yp)); };
  } else if (id == "qrect") {
    const double q = get("q");
    require(q > 0, "qrect needs q > 0");
    c.eval = [q](double x, double y, double xp, double yp) {
      return std::pow(std::abs((x - xp) * (y - yp)), q);
    };
  } else if (id == "ineq") {
    const double t1 = get("t1"), t2 = get("t2");
    require(t1 >= 0 && t2 >= 0, "ineq needs t1, t2 >= 0");
    c.eval = [t1, t2](double x, double y, double xp, double yp) {
      const double s = t1 * std::abs(x - xp) + t2 * std::abs(y - yp);
      return s * s;
    };
  } else if (id == "gw") {
    const double p = get("p"), q = get("q");
    require(p > 0 && q > 0, "gw needs p, q > 0");
    c.eval = [p, q](double x, double y, double xp, double yp) {
      return std::pow(std::abs(std::pow(std::abs(x - xp), q) - std::pow(std::abs(y - yp), q)), p);
    };
  } else if (id == "kendall") {
    c.eval = [](double x, double y, double xp, double yp) { return sgn((x - xp) * (y - yp)); };
  } else if (id == "cov") {
    c.type_xy = true;
    c.eval = [](double x, double y, double xp, double yp) { return 0.5 * (x - xp) * (y - yp); };
  } else if (id == "gini") {
    c.type_xx = false;
    c.type_xy = true;
    c.eval = [](double x, double y, double xp, double yp) { return std::abs(x + y - xp - yp); };
  } else if (id == "linexp") {
    const double g = get("gamma");
    require(g > 0, "linexp needs gamma > 0");
    c.eval = [g](double x, double y, double xp, double yp) {
      return std::abs(y - yp) * std::exp(-g * std::abs(x - xp));
    };
  } else if (id == "gauss") {
    const double a = get("alpha");
    require(a > 0, "gauss needs alpha > 0");
    c.eval = [a](double x, double y, double xp, double yp) {
      const double dx = x - xp, dy = y - yp;
      return std::exp(-a * (dx * dx + dy * dy));
    };
  } else if (id == "powk") {
    const double b = get("beta"), g = get("gamma");
    require(b > 0 && g > 0, "powk needs beta, gamma > 0");
    c.eval = [b, g](double x, double y, double xp, double yp) {
      const double dx = x - xp, dy = y - yp;
      return std::pow(b + dx * dx, -g) * std::pow(b + dy * dy, -g);
    };
  } else if (id == "sexp") {
    const double a = get("alpha"), p = get("p");
    require(a > 0 && p > 0, "sexp needs alpha, p > 0");
    c.eval = [a, p](double x, double y, double xp, double yp) {
      return std::exp(-a * (std::pow(std::abs(x - xp), 2 * p) + std::pow(std::abs(y - yp), 2 * p)));
    };
  } else if (id == "negprod") {
    const double b = get("beta");
    require(b > 0, "negprod needs beta > 0");
    c.eval = [b](double x, double y, double xp, double yp) {
      return -std::pow(std::abs(x - xp), b) * std::pow(std::abs(y - yp), b);
    };
  } else if (id == "gwneg") {
    const double a = get("alpha");
    require(a > 0, "gwneg needs alpha > 0");
    // Singular on the diagonal: returns -inf there.
    c.eval = [a](double x, double y, double xp, double yp) {
      if (x == xp || y == yp) return -std::numeric_limits<double>::infinity();
      return -std::pow(std::abs(x - xp), -a) * std::pow(std::abs(y - yp), -a);
    };
  } else if (id == "maxgw") {
    c.eval = [](double x, double y, double xp, double yp) {
      return std::max(std::abs(x - xp), std::abs(y - yp));
    };
  } else if (id == "maxxy") {
    c.type_xx = false;
    c.type_xy = true;
    c.eval = [](double x, double y, double xp, double yp) {
      return std::max(std::abs(x - y), std::abs(xp - yp));
    };
  }
  return c;
}

CostFn qreg_cost(const Marginal& mu_d, const Marginal& nu_d) {
  if (!mu_d.is_discrete() || !nu_d.is_discrete())
    fail(ErrorCode::InvalidMarginal, "qreg needs discrete marginals");
  auto lookup = [](const std::vector<double>& pts, const std::vector<double>& ws, double v) {
    auto it = std::lower_bound(pts.begin(), pts.end(), v);
    if (it == pts.end() || *it != v) fail(ErrorCode::Domain, "qreg evaluated off the support");
    return ws[static_cast<std::size_t>(it - pts.begin())];
  };
  std::vector<double> xs(mu_d.points().begin(), mu_d.points().end());
  std::vector<double> xw(mu_d.weights().begin(), mu_d.weights().end());
  std::vector<double> ys(nu_d.points().begin(), nu_d.points().end());
  std::vector<double> yw(nu_d.weights().begin(), nu_d.weights().end());
  CostFn c;
  c.id = "qreg";
  c.type_xx = true;
  c.exchangeable = true;
  c.eval = [=](double x, double y, double xp, double yp) {
    if (x != xp || y != yp) return 0.0;
    return 1.0 / (lookup(xs, xw, x) * lookup(ys, yw, y));
  };
  return c;
}

CostFn quadprod_cost(const QuadCoeffs& f, const QuadCoeffs& g) {
  CostFn c;
  c.id = "quadprod";
  c.type_xy = true;
  c.f_coeffs = f;
  c.g_coeffs = g;
  c.eval = [f, g](double x, double y, double xp, double yp) { return f(x, y) * g(xp, yp); };
  return c;
}

CostFn subprod_cost(const std::string& f_name, Bivariate f, double a1, double a2) {
  CostFn c;
  c.id = "subprod";
  c.params = {{"a1", a1}, {"a2", a2}};
  c.type_xy = true;
  c.exchangeable = a1 == a2;
  c.eval = [f, a1, a2](double x, double y, double xp, double yp) {
    return (f(x, y) + a1) * (f(xp, yp) + a2);
  };
  c.id += "[" + f_name + "]";
  return c;
}

CostFn variance_cost(const std::string& f_name, Bivariate f) {
  CostFn c;
  c.id = "var[" + f_name + "]";
  c.type_xy = true;
  c.exchangeable = true;
  c.eval = [f](double x, double y, double xp, double yp) {
    const double d = f(x, y) - f(xp, yp);
    return 0.5 * d * d;
  };
  return c;
}

CostFn gw_type_cost(const std::string& id, Bivariate h) {
  CostFn c;
  c.id = id;
  c.type_xx = true;
  c.exchangeable = true;
  c.eval = [h](double x, double y, double xp, double yp) {
    return h(std::abs(x - xp), std::abs(y - yp));
  };
  return c;
}

Bivariate named_bivariate(const std::string& name) {
  if (name == "negxy") return [](double x, double y) { return -x * y; };
  if (name == "xy") return [](double x, double y) { return x * y; };
  if (name == "absdiff") return [](double x, double y) { return std::abs(x - y); };
  if (name == "sqdiff") return [](double x, double y) { return (x - y) * (x - y); };
  if (name == "sum") return [](double x, double y) { return x + y; };
  if (name == "max") return [](double x, double y) { return std::max(x, y); };
  if (name == "min") return [](double x, double y) { return std::min(x, y); };
  fail(ErrorCode::UnknownCost, "unknown bivariate function '" + name + "'");
}

CostFn parse_cost(const std::string& text, const Marginal* mu_d, const Marginal* nu_d) {
  const auto colon = text.find(':');
  const std::string id = text.substr(0, colon);
  std::vector<std::pair<std::string, std::string>> kv;
  if (colon != std::string::npos) {
    std::string_view rest(text);
    rest.remove_prefix(colon + 1);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      std::string_view item = rest.substr(0, comma);
      const auto eq = item.find('=');
      if (eq == std::string_view::npos || eq == 0)
        fail(ErrorCode::Parse, "expected key=value in cost spec '" + text + "'");
      kv.emplace_back(std::string(item.substr(0, eq)), std::string(item.substr(eq + 1)));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
  }
  auto find = [&](const std::string& key) -> const std::string* {
    for (const auto& [k, v] : kv)
      if (k == key) return &v;
    return nullptr;
  };
  auto check_keys = [&](std::set<std::string> allowed) {
    for (const auto& [k, v] : kv)
      if (!allowed.count(k)) fail(ErrorCode::BadParams, "cost '" + id + "' has no parameter '" + k + "'");
  };

  if (id == "qreg") {
    check_keys({});
    if (!mu_d || !nu_d) fail(ErrorCode::BadParams, "qreg needs discrete marginals");
    return qreg_cost(*mu_d, *nu_d);
  }
  if (id == "quadprod") {
    check_keys({"f", "g"});
    const auto* f = find("f");
    const auto* g = find("g");
    if (!f || !g) fail(ErrorCode::BadParams, "quadprod needs f=... and g=...");
    return quadprod_cost(parse_coeffs(*f), parse_coeffs(*g));
  }
  if (id == "subprod" || id == "var") {
    check_keys(id == "var" ? std::set<std::string>{"f"} : std::set<std::string>{"f", "a1", "a2"});
    const auto* f = find("f");
    if (!f) fail(ErrorCode::BadParams, id + " needs f=<name>");
    if (id == "var") return variance_cost(*f, named_bivariate(*f));
    const auto* a1 = find("a1");
    const auto* a2 = find("a2");
    return subprod_cost(*f, named_bivariate(*f), a1 ? parse_double(*a1, text) : 0.0,
                        a2 ? parse_double(*a2, text) : 0.0);
  }
  ParamMap params;
  for (const auto& [k, v] : kv) params[k] = parse_double(v, text);
  return catalog(id, params);
}

CostFn augment_irrelevant(const CostFn& c, Bivariate w1, Bivariate w2, Bivariate w3,
                          Bivariate w4) {
  CostFn out = c;
  out.id = c.id + "+w";
  out.f_coeffs.reset();
  out.g_coeffs.reset();
  auto zero = [](double, double) { return 0.0; };
  if (!w1) w1 = zero;
  if (!w2) w2 = zero;
  if (!w3) w3 = zero;
  if (!w4) w4 = zero;
  out.exchangeable = false;
  out.eval = [base = c.eval, w1, w2, w3, w4](double x, double y, double xp, double yp) {
    return base(x, y, xp, yp) + w1(x, xp) + w2(y, yp) + w3(x, yp) + w4(xp, y);
  };
  return out;
}

bool is_submodular_on_grid(const Bivariate& f, const std::vector<double>& xgrid,
                           const std::vector<double>& ygrid) {
  if (xgrid.size() < 2 || ygrid.size() < 2) fail(ErrorCode::BadParams, "grid needs at least two points");
  for (std::size_t i = 0; i + 1 < xgrid.size(); ++i)
    for (std::size_t j = 0; j + 1 < ygrid.size(); ++j) {
      const double inc = f(xgrid[i], ygrid[j]) + f(xgrid[i + 1], ygrid[j + 1]) -
                         f(xgrid[i], ygrid[j + 1]) - f(xgrid[i + 1], ygrid[j]);
      if (!(inc <= 1e-12)) return false;
    }
  return true;
}

bool is_submodular_on_grid(const Bivariate& f, const std::vector<double>& grid) {
  return is_submodular_on_grid(f, grid, grid);
}

}  // namespace qot
