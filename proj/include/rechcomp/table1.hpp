#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <vector>

#include "rechcomp/codesign.hpp"
#include "rechcomp/functab.hpp"

namespace rechcomp {

// Worked product example: K = 4 nodes with values {1,2,3,4} mapped to the
// QPSK points (1, -1, i, -i) and a two-slot code that sends values {1,3} in
// slot 0 and {2,4} in slot 1.  Exact small-integer complex arithmetic.
struct Table1Row {
  std::array<int, 4> values;  // node inputs
  double product;
  std::complex<double> uncoded;                // per-slot sum, both slots equal
  std::array<std::complex<double>, 2> coded;   // received sequence with the code
};

// The eleven tuples listed in the worked example, in listed order.
const std::vector<Table1Row>& table1_rows();

QuantizedFunction table1_function();

// QPSK blocks stacked per node, N = 16 entries.
Eigen::VectorXcd table1_modulation();

// Parity bit-split over two slots (level q transmits in slot q mod 2).
CodeMatrix table1_code();

// Levels (0-based) for a row's values.
std::vector<int> table1_levels(const Table1Row& row);

}  // namespace rechcomp
