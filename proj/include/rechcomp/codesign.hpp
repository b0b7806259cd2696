#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "rechcomp/functab.hpp"

namespace rechcomp {

enum class SolveStatus { Feasible, Infeasible, BudgetExhausted };
const char* status_name(SolveStatus s);

// Modulation vector: one complex constellation point per (node, level) entry.
struct ModulationVector {
  Eigen::VectorXcd x;
  double p_max = 0;  // power cap the design was produced under
};

// Slot-activation code: bits(n, l) = 1 when entry n transmits in slot l.
struct CodeMatrix {
  Eigen::MatrixXi bits;

  int rows() const { return static_cast<int>(bits.rows()); }
  int slots() const { return static_cast<int>(bits.cols()); }
  int ones_count() const { return bits.sum(); }

  static CodeMatrix zeros(int n, int l);
  static CodeMatrix all_ones(int n, int l);
  // Round-robin split: level q transmits in slot q mod l, same for every node.
  static CodeMatrix bit_split(int node_count, int level_count, int l);

  std::vector<std::string> row_strings() const;
};

// PSD certificate from the lifted modulation subproblem, W ~ x x^H.
struct LiftedMatrix {
  Eigen::MatrixXcd w;
};

struct SolverConfig {
  double epsilon = 1e-2;
  double p_max = 0;            // <= 0 selects the default N = K*Q
  int slot_count = 1;          // L
  int max_outer_iters = 20;
  double convergence_tol = 1e-8;
  double sdp_accuracy = 0;     // <= 0 selects 1e-6 * max(1, p_max)
  long sdp_max_iters = 0;      // <= 0 keeps the solver default
  int randomization_count = 200;
  long bb_node_limit = 2000000;
  int exhaustive_threshold = 24;  // max n*l handled by brute-force code search
  enum class Init { BitSplit, AllOnes } init_strategy = Init::BitSplit;
  enum class CodeSearch { Auto, Frozen } code_search = CodeSearch::Auto;
  std::uint64_t seed = 0;
};

// One entry of a sparse pairwise difference row (a_i - a_j, or the per-symbol
// count difference in the tied multiset space).
struct DiffTerm {
  int index;
  double coeff;
};

struct Separation {
  std::vector<DiffTerm> diff;  // sorted by index, nonzero coeffs
  double delta_f;
  int pair_index;  // position in ConstraintSet::pairs
};

// Difference rows a_i - a_j over the N = K*Q entry space.
std::vector<Separation> build_separations(const InputEnumeration& enumeration,
                                          const ConstraintSet& constraints);
// Difference rows of per-symbol counts over the Q-entry tied space; valid for
// multiset enumerations where every node shares one constellation and code.
std::vector<Separation> reduced_separations(const InputEnumeration& enumeration,
                                            const ConstraintSet& constraints);
// Drops separations whose (sign-normalized) difference row duplicates another,
// keeping the largest delta_f; the feasible set is unchanged.
std::vector<Separation> dominant_separations(std::vector<Separation> seps);

// Repetition lower bound: max(1, ceil(max_ij delta_f * N / P_max)).
int lmin_bound(const ConstraintSet& constraints, int n, double p_max);

using PairMatrixMap = std::map<std::pair<int, int>, Eigen::MatrixXd>;

// B_{i,j} = sum_l ((a_i - a_j) o c_l)((a_i - a_j) o c_l)^T for all i < j.
PairMatrixMap build_pair_matrices(const InputEnumeration& enumeration,
                                  const CodeMatrix& code);

struct ModulationSolve {
  LiftedMatrix lifted;
  ModulationVector x;
  SolveStatus status = SolveStatus::Infeasible;
  bool rank_one = false;     // second-eigenvalue test passed, x exact
  double sdp_objective = 0;  // Tr(W) of the reported lifting
  double duality_gap = 0;
  int worst_pair = -1;       // most violated pair when infeasible
  long iterations = 0;
};

// Modulation step: min Tr(W) over PSD W with Tr(W B_ij) >= delta_f and
// Tr(W) <= p_max, then rank-one extraction or Gaussian randomization.
ModulationSolve solve_modulation_subproblem(const PairMatrixMap& pair_matrices,
                                            const ConstraintSet& constraints,
                                            double p_max, int slot_count,
                                            const SolverConfig& cfg);
// Same solve from sparse difference rows; used by alternate_minimize.
ModulationSolve solve_modulation_core(int n, const std::vector<Separation>& seps,
                                      const CodeMatrix& code, double p_max,
                                      const SolverConfig& cfg);

struct CodeSolve {
  CodeMatrix code;
  SolveStatus status = SolveStatus::Infeasible;
  long nodes_used = 0;
};

// Code step: minimize total slot activations subject to
// sum_l |(d_ij)^H c_l|^2 >= delta_f with d_ij = (a_i - a_j) o x.
CodeSolve solve_code_subproblem(const Eigen::VectorXcd& x,
                                const std::vector<Separation>& seps, int n,
                                int slot_count, const SolverConfig& cfg,
                                const CodeMatrix* incumbent = nullptr);
CodeSolve solve_code_exhaustive(const Eigen::VectorXcd& x,
                                const std::vector<Separation>& seps, int n,
                                int slot_count);
CodeSolve solve_code_branch_and_bound(const Eigen::VectorXcd& x,
                                      const std::vector<Separation>& seps, int n,
                                      int slot_count, long node_limit,
                                      const CodeMatrix* incumbent = nullptr);

struct FeasibilityReport {
  std::vector<double> margins;  // aligned with ConstraintSet::pairs
  bool feasible = true;
  double min_margin = 0;
  int worst_pair = -1;
};

// Margins dist^2(v_i, v_j) - delta_f per constraint pair; feasible when every
// margin >= -tol * max(1, delta_f).
FeasibilityReport check_feasibility(const Eigen::VectorXcd& x, const CodeMatrix& code,
                                    const InputEnumeration& enumeration,
                                    const ConstraintSet& constraints,
                                    double tol = 1e-6);

struct DesignResult {
  ModulationVector x;
  CodeMatrix code;
  std::vector<double> surrogate_trace;  // L*|x|^2 + total ones, per iteration
  FeasibilityReport feasibility;
  SolveStatus status = SolveStatus::Infeasible;
  int iterations_used = 0;
  bool tied_symbol_space = false;  // designed over the per-symbol space
};

// Alternating minimization of the joint surrogate, refusing slot counts below
// lmin_bound.  Multiset enumerations are designed in the tied per-symbol
// space and expanded to the full entry space on return.
DesignResult alternate_minimize(const InputEnumeration& enumeration,
                                const ConstraintSet& constraints,
                                const SolverConfig& cfg);

}  // namespace rechcomp
