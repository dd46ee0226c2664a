#include "qot/qp.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "qot/errors.hpp"

namespace qot {

QpForm build_qp(const Marginal& mu_d, const Marginal& nu_d, const CostFn& c, std::size_t limit) {
  if (!mu_d.is_discrete() || !nu_d.is_discrete())
    fail(ErrorCode::InvalidMarginal, "build_qp needs discrete marginals");
  QpForm qp;
  qp.n_rows = mu_d.size();
  qp.n_cols = nu_d.size();
  const std::size_t dim = qp.n_rows * qp.n_cols;
  if (dim > limit)
    fail(ErrorCode::SizeLimit, "QP dimension " + std::to_string(dim) + " exceeds limit " + std::to_string(limit));
  qp.xs.assign(mu_d.points().begin(), mu_d.points().end());
  qp.ys.assign(nu_d.points().begin(), nu_d.points().end());
  qp.mu.assign(mu_d.weights().begin(), mu_d.weights().end());
  qp.nu.assign(nu_d.weights().begin(), nu_d.weights().end());
  qp.C.resize(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < qp.n_rows; ++i)
    for (std::size_t j = 0; j < qp.n_cols; ++j)
      for (std::size_t k = 0; k < qp.n_rows; ++k)
        for (std::size_t l = 0; l < qp.n_cols; ++l) {
          const double v = c(qp.xs[i], qp.ys[j], qp.xs[k], qp.ys[l]);
          if (!std::isfinite(v)) fail(ErrorCode::NonFiniteCost, "cost '" + c.id + "' is not finite on the grid");
          qp.C(static_cast<Eigen::Index>(qp.index(i, j)), static_cast<Eigen::Index>(qp.index(k, l))) = v;
        }
  return qp;
}

Eigen::VectorXd vectorize(const TransportPlan& plan) {
  Eigen::VectorXd pi(static_cast<Eigen::Index>(plan.mass().size()));
  for (std::size_t k = 0; k < plan.mass().size(); ++k) pi(static_cast<Eigen::Index>(k)) = plan.mass()[k];
  return pi;
}

TransportPlan unvectorize(const QpForm& qp, const Eigen::VectorXd& pi) {
  if (static_cast<std::size_t>(pi.size()) != qp.n_rows * qp.n_cols)
    fail(ErrorCode::SizeMismatch, "plan vector has wrong length");
  return TransportPlan(qp.xs, qp.ys, std::vector<double>(pi.data(), pi.data() + pi.size()));
}

Certificate convexity_certificate(const QpForm& qp) {
  const Eigen::MatrixXd sym = 0.5 * (qp.C + qp.C.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
  Certificate cert;
  cert.min_eigenvalue = solver.eigenvalues().minCoeff();
  const double norm = qp.C.cwiseAbs().rowwise().sum().maxCoeff();
  cert.psd = cert.min_eigenvalue >= -1e-9 * norm;
  return cert;
}

}  // namespace qot
