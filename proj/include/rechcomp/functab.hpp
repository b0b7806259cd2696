#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rechcomp {

enum class BuiltinFunction { Sum, Product, Max };

BuiltinFunction builtin_from_name(const std::string& name);
std::string builtin_name(BuiltinFunction kind);

// A function of K quantized inputs.  Each node k draws its value from an
// ordered list of Q reals; the evaluator consumes the selected values.
struct QuantizedFunction {
  int node_count = 0;   // K
  int level_count = 0;  // Q
  std::vector<std::vector<double>> domain_values;  // K lists of Q values
  std::function<double(const std::vector<double>&)> evaluator;
  bool symmetric = false;

  double value_of(int node, int level) const { return domain_values[node][level]; }

  double evaluate_levels(const std::vector<int>& levels) const;

  // Built-in family (sum / product / max) with one shared value list.
  static QuantizedFunction builtin(BuiltinFunction kind, int node_count,
                                   std::vector<double> values);
};

enum class EnumerationMode { Full, Multiset };

// Table of input tuples: level-index rows in canonical order, their function
// outputs, and (implicitly) the 0/1 selection matrix A with one block of Q
// columns per node.
struct InputEnumeration {
  EnumerationMode mode = EnumerationMode::Full;
  int node_count = 0;   // K
  int level_count = 0;  // Q
  std::vector<std::vector<int>> rows;  // M tuples of level indices
  std::vector<double> output_values;   // M outputs, aligned with rows

  int num_rows() const { return static_cast<int>(rows.size()); }
  int vector_size() const { return node_count * level_count; }  // N = K*Q

  // Column indices of the K ones in row i of A.
  std::vector<int> support(int row) const;

  // Dense A (M x N); intended for small instances and tests.
  Eigen::MatrixXd selection_matrix() const;
};

// Canonical enumeration of the input domain.  Full mode lists all Q^K level
// tuples in lexicographic order; multiset mode (valid only for symmetric f)
// lists the non-decreasing representatives, C(Q+K-1, K) of them.
// Throws std::length_error when the row count would exceed max_rows.
InputEnumeration enumerate_inputs(const QuantizedFunction& f, EnumerationMode mode,
                                  std::size_t max_rows = 1000000);

struct SeparationPair {
  int i = 0;
  int j = 0;          // i < j, outputs differ
  double delta_f = 0; // epsilon * |f_i - f_j|^2
};

struct ConstraintSet {
  double epsilon = 1e-2;
  std::vector<SeparationPair> pairs;
};

// All index pairs with distinct outputs, i < j, ordered lexicographically.
ConstraintSet constraint_pairs(const InputEnumeration& enumeration, double epsilon);

// Canonical text form; used by determinism tests and the CLI.
std::string to_text(const InputEnumeration& enumeration);

}  // namespace rechcomp
