#include "rechcomp/table1.hpp"

namespace rechcomp {

namespace {
constexpr std::complex<double> kI{0, 1};
}

const std::vector<Table1Row>& table1_rows() {
  static const std::vector<Table1Row> rows = {
      {{1, 1, 1, 1}, 1, {4, 0}, {{{4, 0}, {0, 0}}}},
      {{1, 1, 2, 2}, 4, {0, 0}, {{{2, 0}, {-2, 0}}}},
      {{1, 2, 2, 2}, 8, {-2, 0}, {{{1, 0}, {-3, 0}}}},
      {{1, 2, 2, 3}, 12, {-1, 1}, {{{1, 1}, {-2, 0}}}},
      {{1, 2, 2, 4}, 16, {-1, -1}, {{{1, 0}, {-2, -1}}}},
      {{1, 2, 3, 4}, 24, {0, 0}, {{{1, 1}, {-1, -1}}}},
      {{2, 2, 2, 2}, 16, {-4, 0}, {{{0, 0}, {-4, 0}}}},
      {{2, 3, 3, 4}, 72, {-1, 1}, {{{0, 2}, {-1, -1}}}},
      {{3, 3, 3, 3}, 81, {0, 4}, {{{0, 4}, {0, 0}}}},
      {{3, 3, 4, 4}, 144, {0, 0}, {{{0, 2}, {0, -2}}}},
      {{4, 4, 4, 4}, 256, {0, -4}, {{{0, 0}, {0, -4}}}},
  };
  return rows;
}

QuantizedFunction table1_function() {
  return QuantizedFunction::builtin(BuiltinFunction::Product, 4, {1, 2, 3, 4});
}

Eigen::VectorXcd table1_modulation() {
  Eigen::VectorXcd x(16);
  const std::complex<double> qpsk[4] = {{1, 0}, {-1, 0}, kI, -kI};
  for (int k = 0; k < 4; ++k)
    for (int q = 0; q < 4; ++q) x[k * 4 + q] = qpsk[q];
  return x;
}

CodeMatrix table1_code() { return CodeMatrix::bit_split(4, 4, 2); }

std::vector<int> table1_levels(const Table1Row& row) {
  std::vector<int> levels(4);
  for (int k = 0; k < 4; ++k) levels[k] = row.values[k] - 1;
  return levels;
}

}  // namespace rechcomp
