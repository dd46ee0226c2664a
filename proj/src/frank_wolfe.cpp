#include <algorithm>
#include <cmath>

#include "qot/errors.hpp"
#include "qot/linear_ot.hpp"
#include "qot/solver.hpp"

namespace qot {

std::string to_string(Termination t) {
  switch (t) {
    case Termination::GapTol: return "gap_tol";
    case Termination::MaxIter: return "max_iter";
    case Termination::LocalOpt: return "local_opt";
    case Termination::Exact: return "exact";
  }
  return "?";
}

SolveReport solve_frank_wolfe(const QpForm& qp, const TransportPlan& init, const FwOptions& opt) {
  const std::size_t n = qp.n_rows, m = qp.n_cols;
  if (init.rows() != n || init.cols() != m) fail(ErrorCode::InfeasibleInit, "initial plan has the wrong shape");
  {
    const auto rs = init.row_sums();
    const auto cs = init.col_sums();
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) err = std::max(err, std::abs(rs[i] - qp.mu[i]));
    for (std::size_t j = 0; j < m; ++j) err = std::max(err, std::abs(cs[j] - qp.nu[j]));
    if (err > 1e-9) fail(ErrorCode::InfeasibleInit, "initial plan violates the marginals");
  }

  const Eigen::MatrixXd S = qp.C + qp.C.transpose();
  Eigen::VectorXd pi = vectorize(init);
  double f = qp.objective(pi);
  std::vector<double> trace{f};
  Termination term = Termination::MaxIter;
  double gap = 0.0;
  std::size_t it = 0;
  Eigen::MatrixXd grad_mat(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));

  for (; it < opt.max_iter; ++it) {
    const Eigen::VectorXd g = S * pi;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < m; ++j)
        grad_mat(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            g(static_cast<Eigen::Index>(qp.index(i, j)));
    const Eigen::MatrixXd vertex = exact_linear_ot(grad_mat, qp.mu, qp.nu);
    Eigen::VectorXd d(pi.size());
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < m; ++j)
        d(static_cast<Eigen::Index>(qp.index(i, j))) =
            vertex(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    d -= pi;
    const double b = g.dot(d);
    gap = -b;
    if (gap <= opt.gap_tol) {
      term = Termination::GapTol;
      break;
    }
    const double a = d.dot(qp.C * d);
    const double t = a > 0.0 ? std::clamp(-b / (2.0 * a), 0.0, 1.0) : 1.0;
    pi += t * d;
    for (Eigen::Index k = 0; k < pi.size(); ++k) pi(k) = std::max(pi(k), 0.0);
    f = qp.objective(pi);
    trace.push_back(f);
  }

  SolveReport rep{unvectorize(qp, pi)};
  rep.objective = f;
  rep.method = "fw";
  rep.iterations = it;
  rep.trace = std::move(trace);
  rep.termination = term;
  rep.gap = gap;
  if (opt.certify) rep.certificate = convexity_certificate(qp);
  rep.optimality = rep.certificate && rep.certificate->psd && term == Termination::GapTol ? "global" : "stationary";
  return rep;
}

}  // namespace qot
