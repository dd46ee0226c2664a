#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "qot/costs.hpp"
#include "qot/couplings.hpp"
#include "qot/marginals.hpp"

namespace qot {

/// pi^T C pi over vectorised plans. Index map is row-major: cell (i,j) sits at
/// i*M + j.
struct QpForm {
  std::size_t n_rows = 0;
  std::size_t n_cols = 0;
  Eigen::MatrixXd C;
  std::vector<double> mu;
  std::vector<double> nu;
  std::vector<double> xs;
  std::vector<double> ys;

  std::size_t index(std::size_t i, std::size_t j) const { return i * n_cols + j; }
  double objective(const Eigen::VectorXd& pi) const { return pi.dot(C * pi); }
};

inline constexpr std::size_t kDefaultQpLimit = 4096;

/// Throws SizeLimit when N*M exceeds `limit`, NonFiniteCost on a non-finite entry.
QpForm build_qp(const Marginal& mu_d, const Marginal& nu_d, const CostFn& c,
                std::size_t limit = kDefaultQpLimit);

Eigen::VectorXd vectorize(const TransportPlan& plan);
TransportPlan unvectorize(const QpForm& qp, const Eigen::VectorXd& pi);

struct Certificate {
  bool psd = false;
  double min_eigenvalue = 0.0;
};

/// Smallest eigenvalue of (C + C^T)/2; psd iff it is >= -1e-9 * ||C||_inf.
Certificate convexity_certificate(const QpForm& qp);

}  // namespace qot
