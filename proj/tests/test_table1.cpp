#include <complex>
#include <vector>

#include "doctest.h"
#include "rechcomp/decoder.hpp"
#include "rechcomp/macsim.hpp"
#include "rechcomp/table1.hpp"

using namespace rechcomp;

namespace {

// Independent recomputation from the QPSK map and the parity split, kept
// local so regressions in the library constants cannot hide.
std::complex<double> qpsk_point(int value) {
  static const std::complex<double> pts[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  return pts[value - 1];
}

}  // namespace

TEST_CASE("worked example rows are exact") {
  const auto& rows = table1_rows();
  REQUIRE(rows.size() == 11);

  for (const auto& row : rows) {
    double product = 1;
    std::complex<double> uncoded = 0;
    std::complex<double> slot0 = 0;
    std::complex<double> slot1 = 0;
    for (int value : row.values) {
      product *= value;
      std::complex<double> p = qpsk_point(value);
      uncoded += p;
      if (value % 2 == 1)
        slot0 += p;  // odd values transmit in the first slot
      else
        slot1 += p;
    }
    CHECK(row.product == product);
    CHECK(row.uncoded == uncoded);
    CHECK(row.coded[0] == slot0);
    CHECK(row.coded[1] == slot1);
  }
}

TEST_CASE("listed received sequences") {
  const auto& rows = table1_rows();
  auto find = [&](std::array<int, 4> v) -> const Table1Row& {
    for (const auto& r : rows)
      if (r.values == v) return r;
    REQUIRE(false);
    return rows[0];
  };

  const std::complex<double> i{0, 1};
  CHECK(find({1, 1, 2, 2}).coded[0] == std::complex<double>(2, 0));
  CHECK(find({1, 1, 2, 2}).coded[1] == std::complex<double>(-2, 0));
  CHECK(find({1, 2, 3, 4}).coded[0] == 1.0 + i);
  CHECK(find({1, 2, 3, 4}).coded[1] == -1.0 - i);
  CHECK(find({3, 3, 4, 4}).coded[0] == 2.0 * i);
  CHECK(find({3, 3, 4, 4}).coded[1] == -2.0 * i);

  // The uncoded channel collapses these three products onto the origin.
  CHECK(find({1, 1, 2, 2}).uncoded == std::complex<double>(0, 0));
  CHECK(find({1, 2, 3, 4}).uncoded == std::complex<double>(0, 0));
  CHECK(find({3, 3, 4, 4}).uncoded == std::complex<double>(0, 0));
}

TEST_CASE("rows agree with the channel simulator") {
  Eigen::VectorXcd x = table1_modulation();
  CodeMatrix code = table1_code();
  ChannelModel channel;
  NoiseModel noise{0.0, 0};

  for (const auto& row : table1_rows()) {
    std::mt19937_64 rng(1);
    SimOutput sim = simulate(x, code, table1_levels(row), 4, channel, noise, rng);
    REQUIRE(sim.y.size() == 2);
    CHECK(sim.y[0] == row.coded[0]);
    CHECK(sim.y[1] == row.coded[1]);
  }
}

TEST_CASE("separation requirement between products 4 and 24") {
  QuantizedFunction f = table1_function();
  InputEnumeration en = enumerate_inputs(f, EnumerationMode::Multiset);
  ConstraintSet cs = constraint_pairs(en, 1e-2);

  int i4 = -1, i24 = -1;
  for (int i = 0; i < en.num_rows(); ++i) {
    if (en.output_values[i] == 4.0) i4 = i;
    if (en.output_values[i] == 24.0) i24 = i;
  }
  REQUIRE(i4 >= 0);
  REQUIRE(i24 >= 0);
  double found = -1;
  for (const auto& p : cs.pairs)
    if ((p.i == i4 && p.j == i24) || (p.i == i24 && p.j == i4)) found = p.delta_f;
  CHECK(found == doctest::Approx(4.0).epsilon(1e-12));  // 1e-2 * (24 - 4)^2
}

TEST_CASE("uncoded channel merges 4, 24 and 144 onto one group") {
  // Enumeration restricted to the eleven listed tuples, decoded without any
  // slot coding: the three origin collisions must merge and decode to the
  // mean of their products.
  const auto& rows = table1_rows();
  InputEnumeration en;
  en.mode = EnumerationMode::Full;
  en.node_count = 4;
  en.level_count = 4;
  for (const auto& row : rows) {
    en.rows.push_back(table1_levels(row));
    en.output_values.push_back(row.product);
  }

  Eigen::VectorXcd x = table1_modulation();
  CodeMatrix ones = CodeMatrix::all_ones(16, 1);
  Codebook cb = build_codebook(en, x, ones);
  // Small epsilon keeps every coded pair separated; only the exact uncoded
  // collisions ({4, 24, 144} at the origin and {12, 72}) are left to merge.
  ConstraintSet cs = constraint_pairs(en, 1e-4);
  Codebook merged = merge_unresolved(cb, cs, 1e-6);

  const CodebookEntry& e4 = merged.entries[1];  // (1,1,2,2)
  REQUIRE(e4.f == 4.0);
  const CodebookGroup& g = merged.groups[e4.group];
  REQUIRE(g.members.size() == 3);
  double outputs = 0;
  for (int m : g.members) outputs += merged.entries[m].f;
  CHECK(outputs == 4.0 + 24.0 + 144.0);
  CHECK(g.decoded_output == doctest::Approx(172.0 / 3.0).epsilon(1e-14));

  // With the parity split the same tuples decode exactly.
  CodeMatrix code = table1_code();
  Codebook coded = merge_unresolved(build_codebook(en, x, code), cs, 1e-6);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    Eigen::VectorXcd y(2);
    y << rows[i].coded[0], rows[i].coded[1];
    CHECK(decode(y, coded).value == rows[i].product);
  }

  Eigen::VectorXcd probe(2);
  probe << std::complex<double>(2, 0), std::complex<double>(-2, 0);
  CHECK(decode(probe, coded).value == 4.0);
}
