#include "qot/estimator.hpp"

#include <cmath>
#include <vector>

#include "qot/errors.hpp"

namespace qot {

namespace {

struct Kahan {
  double sum = 0.0;
  double comp = 0.0;
  void add(double v) {
    const double y = v - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
};

struct Atom {
  double x, y, w;
};

std::vector<Atom> atoms_of(const TransportPlan& plan) {
  std::vector<Atom> out;
  for (std::size_t i = 0; i < plan.rows(); ++i)
    for (std::size_t j = 0; j < plan.cols(); ++j)
      if (plan(i, j) > 0.0) out.push_back({plan.xs()[i], plan.ys()[j], plan(i, j)});
  return out;
}

// Mean and standard error of terms via Welford.
struct Welford {
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;
  void add(double v) {
    ++n;
    const double d = v - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (v - mean);
  }
  double std_error() const {
    if (n < 2) return 0.0;
    return std::sqrt(m2 / static_cast<double>(n - 1)) / std::sqrt(static_cast<double>(n));
  }
};

}  // namespace

std::string to_string(EstimateMethod m) {
  switch (m) {
    case EstimateMethod::Exact: return "exact";
    case EstimateMethod::McPairs: return "mc-pairs";
    case EstimateMethod::McUstat: return "mc-ustat";
  }
  return "?";
}

double qcost_exact(const TransportPlan& plan, const CostFn& c) {
  const auto atoms = atoms_of(plan);
  Kahan total;
  for (const auto& a : atoms) {
    Kahan row;
    for (const auto& b : atoms) {
      const double v = c(a.x, a.y, b.x, b.y);
      if (!std::isfinite(v)) fail(ErrorCode::NonFiniteCost, "cost '" + c.id + "' is not finite on the plan support");
      row.add(v * b.w);
    }
    total.add(a.w * row.sum);
  }
  return total.sum;
}

CostEstimate qcost_mc(const CouplingSpec& spec, const CostFn& c, std::size_t n, std::uint64_t seed,
                      std::optional<EstimateMethod> method) {
  if (n < 2) fail(ErrorCode::BadParams, "Monte Carlo needs at least two samples");
  const EstimateMethod m =
      method.value_or(n > kUstatCutoff ? EstimateMethod::McPairs : EstimateMethod::McUstat);
  if (m == EstimateMethod::Exact) fail(ErrorCode::BadParams, "qcost_mc cannot run the exact method");
  if (m == EstimateMethod::McPairs && n % 2 != 0)
    fail(ErrorCode::BadParams, "disjoint-pair estimator needs an even sample count");

  const auto xy = sample_coupling(spec, n, seed);
  Welford acc;
  auto check = [&](double v) {
    if (!std::isfinite(v)) fail(ErrorCode::NonFiniteCost, "cost '" + c.id + "' is not finite on a sample");
    return v;
  };
  if (m == EstimateMethod::McPairs) {
    for (std::size_t k = 0; k + 1 < n; k += 2) {
      const auto& [x, y] = xy[k];
      const auto& [xp, yp] = xy[k + 1];
      acc.add(check(c(x, y, xp, yp)));
    }
  } else {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const auto& [x, y] = xy[i];
        const auto& [xp, yp] = xy[j];
        acc.add(check(0.5 * (c(x, y, xp, yp) + c(xp, yp, x, y))));
      }
  }
  CostEstimate est;
  est.value = acc.mean;
  est.std_error = acc.std_error();
  est.samples = n;
  est.seed = seed;
  est.method = m;
  return est;
}

double kendall_tau(const TransportPlan& plan) { return qcost_exact(plan, catalog("kendall")); }

double gini_objective(const TransportPlan& plan) {
  const auto rs = plan.row_sums();
  const auto cs = plan.col_sums();
  double ex = 0.0, ey = 0.0;
  for (std::size_t i = 0; i < plan.rows(); ++i) ex += rs[i] * plan.xs()[i];
  for (std::size_t j = 0; j < plan.cols(); ++j) ey += cs[j] * plan.ys()[j];
  const double denom = 2.0 * (ex + ey);
  if (!(denom > 0.0)) fail(ErrorCode::DegenerateDenominator, "Gini ratio needs E X + E Y > 0");
  return qcost_exact(plan, catalog("gini")) / denom;
}

double eta_association(const TransportPlan& plan) {
  const std::size_t n = plan.rows(), m = plan.cols();
  const auto rs = plan.row_sums();
  const auto cs = plan.col_sums();
  const auto& ys = plan.ys();
  Kahan spread;
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t k = 0; k < m; ++k) spread.add(cs[j] * cs[k] * std::abs(ys[j] - ys[k]));
  if (!(spread.sum > 0.0)) fail(ErrorCode::DegenerateMarginal, "eta needs a non-degenerate second marginal");
  Kahan within;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(rs[i] > 0.0)) continue;
    Kahan row;
    for (std::size_t j = 0; j < m; ++j) {
      if (plan(i, j) == 0.0) continue;
      for (std::size_t k = 0; k < m; ++k) row.add(plan(i, j) * plan(i, k) * std::abs(ys[j] - ys[k]));
    }
    within.add(row.sum / rs[i]);
  }
  return 1.0 - within.sum / spread.sum;
}

}  // namespace qot
