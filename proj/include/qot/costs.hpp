#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qot/marginals.hpp"

namespace qot {

using Evaluator = std::function<double(double, double, double, double)>;
using Bivariate = std::function<double(double, double)>;

/// f(x,y) = c0 + cx*x + cy*y + cxx*x^2 + cyy*y^2 + cxy*x*y.
struct QuadCoeffs {
  double c0 = 0, cx = 0, cy = 0, cxx = 0, cyy = 0, cxy = 0;
  double operator()(double x, double y) const {
    return c0 + cx * x + cy * y + cxx * x * x + cyy * y * y + cxy * x * y;
  }
};

/// A cost c(x,y,x',y') with its catalog identity and structural flags.
struct CostFn {
  std::string id;
  std::vector<std::pair<std::string, double>> params;
  bool type_xx = false;
  bool type_xy = false;
  /// c(x,y,x',y') == c(x',y',x,y) pointwise.
  bool exchangeable = false;
  Evaluator eval;
  /// Coefficient form of f and g for c = f(x,y) g(x',y'), when known.
  std::optional<QuadCoeffs> f_coeffs;
  std::optional<QuadCoeffs> g_coeffs;

  double operator()(double x, double y, double xp, double yp) const { return eval(x, y, xp, yp); }
  double param(const std::string& name) const;
  /// Round-trippable spec string, e.g. "qrect:q=1.5".
  std::string describe() const;
};

using ParamMap = std::map<std::string, double>;

/// Catalog entries (parameters and defaults):
///   rect, qrect(q=1), ineq(t1=1,t2=1), gw(p=1,q=1), kendall, cov, gini,
///   linexp(gamma=1), gauss(alpha=0.5), powk(beta=4,gamma=1),
///   sexp(alpha=0.1,p=0.75), negprod(beta=1), gwneg(alpha=0.25), maxgw, maxxy.
/// qreg, quadprod, subprod and var need extra data and have their own builders.
CostFn catalog(const std::string& id, const ParamMap& params = {});

/// Parses "id" or "id:key=val,key=val". quadprod takes
/// "quadprod:f=c0/cx/cy/cxx/cyy/cxy,g=...", subprod "subprod:f=negxy,a1=..,a2=..",
/// var "var:f=absdiff". qreg needs the discrete marginals.
CostFn parse_cost(const std::string& text, const Marginal* mu_d = nullptr,
                  const Marginal* nu_d = nullptr);

/// 1{x=x', y=y'} / (mu({x}) nu({y})).
CostFn qreg_cost(const Marginal& mu_d, const Marginal& nu_d);
CostFn quadprod_cost(const QuadCoeffs& f, const QuadCoeffs& g);
/// (f(x,y)+a1)(f(x',y')+a2).
CostFn subprod_cost(const std::string& f_name, Bivariate f, double a1, double a2);
/// (f(x,y)-f(x',y'))^2 / 2, whose quadratic-form cost is Var f(X,Y).
CostFn variance_cost(const std::string& f_name, Bivariate f);
/// h(|x-x'|, |y-y'|).
CostFn gw_type_cost(const std::string& id, Bivariate h);

/// Named bivariate functions: negxy (-xy), xy, absdiff (|x-y|), sqdiff ((x-y)^2),
/// sum (x+y), max, min.
Bivariate named_bivariate(const std::string& name);

/// c + w1(x,x') + w2(y,y') + w3(x,y') + w4(x',y). Empty functions count as zero.
CostFn augment_irrelevant(const CostFn& c, Bivariate w1, Bivariate w2, Bivariate w3,
                          Bivariate w4);

/// True iff every adjacent 2x2 increment f(a,c)+f(b,d)-f(a,d)-f(b,c) on the
/// grid is <= 1e-12.
bool is_submodular_on_grid(const Bivariate& f, const std::vector<double>& grid);
bool is_submodular_on_grid(const Bivariate& f, const std::vector<double>& xgrid,
                           const std::vector<double>& ygrid);

}  // namespace qot
