#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "qot/costs.hpp"
#include "qot/couplings.hpp"

namespace qot {

enum class EstimateMethod { Exact, McPairs, McUstat };

std::string to_string(EstimateMethod m);

struct CostEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  EstimateMethod method = EstimateMethod::Exact;
  unsigned workers = 1;
};

/// Above this sample count qcost_mc switches from the full U-statistic to
/// disjoint pairs.
inline constexpr std::size_t kUstatCutoff = 10000;

/// sum_{i,j,k,l} c(x_i,y_j,x_k,y_l) pi_ij pi_kl over the nonzero entries, with
/// compensated summation. Throws NonFiniteCost on a non-finite term.
double qcost_exact(const TransportPlan& plan, const CostFn& c);

/// Monte Carlo estimate on n draws from the coupling. McPairs averages c over
/// the n/2 disjoint couples (2k, 2k+1); McUstat averages the symmetrised cost
/// over all unordered couples. std_error is the sample sd of the terms over
/// sqrt(#terms).
CostEstimate qcost_mc(const CouplingSpec& spec, const CostFn& c, std::size_t n, std::uint64_t seed,
                      std::optional<EstimateMethod> method = std::nullopt);

double kendall_tau(const TransportPlan& plan);

/// E|X+Y-X'-Y'| / (2 (E X + E Y)); DegenerateDenominator when E X + E Y <= 0.
double gini_objective(const TransportPlan& plan);

/// 1 - E|Y-Y''| / E|Y-Y'| with Y, Y'' conditionally iid given X.
double eta_association(const TransportPlan& plan);

}  // namespace qot
