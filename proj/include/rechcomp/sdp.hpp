#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "rechcomp/codesign.hpp"

namespace rechcomp {

// One linear constraint <B, W> >= rhs with B = sum_t u_t u_t^T given by its
// sparse rank-one factors.
struct SdpConstraint {
  std::vector<std::vector<DiffTerm>> factors;
  double rhs = 0;
  int pair_index = -1;
};

struct TraceSdpOptions {
  double accuracy = 1e-6;   // duality-gap target
  long max_iters = 400000;
  double rho = 1.0;         // initial ADMM penalty
};

struct TraceSdpResult {
  Eigen::MatrixXd w;        // symmetric PSD iterate, feasibility-rescaled
  double objective = 0;     // Tr(w)
  double dual_bound = 0;    // certified lower bound on the optimal trace
  double gap = 0;
  SolveStatus status = SolveStatus::Infeasible;
  int worst_pair = -1;
  long iterations = 0;
};

// min Tr(W) s.t. <B_p, W> >= rhs_p, Tr(W) <= trace_cap, W PSD, solved by
// ADMM splitting with PSD projection via eigendecomposition.  Infeasibility
// is certified through the dual: any multipliers lambda >= 0 give the bound
// sum lambda_p rhs_p - max(0, eigmax(sum lambda_p B_p) - 1) * trace_cap on
// the optimal trace, so a bound above trace_cap proves there is no feasible W.
TraceSdpResult solve_trace_min_sdp(int n, const std::vector<SdpConstraint>& constraints,
                                   double trace_cap, const TraceSdpOptions& options);

double quad_value(const SdpConstraint& c, const Eigen::VectorXcd& x);

}  // namespace rechcomp
