// Acceptance harness: one line per criterion, nonzero exit on any failure.
// Tolerances and budgets are pinned here, next to the checks they guard.

#include <array>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "rechcomp/baselines.hpp"
#include "rechcomp/codesign.hpp"
#include "rechcomp/decoder.hpp"
#include "rechcomp/functab.hpp"
#include "rechcomp/harness.hpp"
#include "rechcomp/macsim.hpp"
#include "rechcomp/rng.hpp"
#include "rechcomp/table1.hpp"

using namespace rechcomp;

namespace {

struct Checker {
  bool ok = true;
  std::string first_failure;

  void expect(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      first_failure = what;
    }
  }
};

double sweep_cell(const NmseReport& r, const std::string& method, int l,
                  double snr) {
  for (const auto& row : r.rows)
    if (row.method == method && row.slot_count == l && row.snr_db == snr)
      return row.nmse;
  return std::numeric_limits<double>::quiet_NaN();
}

// ---------------------------------------------------------------- criterion 1
// The worked product example is reproduced with exact complex integer
// arithmetic: eleven rows, the listed received pairs, and the three-way
// collision of products 4, 24 and 144 on the uncoded channel.
void criterion1(Checker& c) {
  const auto& rows = table1_rows();
  c.expect(rows.size() == 11, "expected 11 listed tuples");

  const std::complex<double> qpsk[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  for (const auto& row : rows) {
    double product = 1;
    std::complex<double> uncoded = 0, slot0 = 0, slot1 = 0;
    for (int value : row.values) {
      product *= value;
      std::complex<double> p = qpsk[value - 1];
      uncoded += p;
      (value % 2 == 1 ? slot0 : slot1) += p;
    }
    c.expect(row.product == product, "product mismatch");
    c.expect(row.uncoded == uncoded, "uncoded sample mismatch");
    c.expect(row.coded[0] == slot0 && row.coded[1] == slot1,
             "coded sequence mismatch");
  }

  auto row_of = [&](std::array<int, 4> v) -> const Table1Row* {
    for (const auto& r : rows)
      if (r.values == v) return &r;
    return nullptr;
  };
  const std::complex<double> i{0, 1};
  const Table1Row* r1122 = row_of({1, 1, 2, 2});
  const Table1Row* r1234 = row_of({1, 2, 3, 4});
  const Table1Row* r3344 = row_of({3, 3, 4, 4});
  c.expect(r1122 && r1122->coded[0] == 2.0 + 0.0 * i &&
               r1122->coded[1] == -2.0 + 0.0 * i,
           "(1,1,2,2) must receive (2, -2)");
  c.expect(r1234 && r1234->coded[0] == 1.0 + i && r1234->coded[1] == -1.0 - i,
           "(1,2,3,4) must receive (1+i, -1-i)");
  c.expect(r3344 && r3344->coded[0] == 2.0 * i && r3344->coded[1] == -2.0 * i,
           "(3,3,4,4) must receive (2i, -2i)");
  for (const Table1Row* r : {r1122, r1234, r3344})
    c.expect(r && r->uncoded == std::complex<double>(0, 0),
             "products 4, 24, 144 must collide at the origin without coding");
}

// ---------------------------------------------------------------- criterion 2
// Every input tuple of the K = 4, Q = 8 product instance decodes exactly over
// the noiseless channel with the designed modulation and code.
void criterion2(Checker& c) {
  QuantizedFunction f = QuantizedFunction::builtin(
      BuiltinFunction::Product, 4, {0, 1, 2, 3, 4, 5, 6, 7});
  InputEnumeration en = enumerate_inputs(f, EnumerationMode::Multiset);
  ConstraintSet cs = constraint_pairs(en, 6e-7);

  SolverConfig cfg;
  cfg.epsilon = 6e-7;
  cfg.p_max = 32;
  cfg.slot_count = 4;
  cfg.seed = 24;
  cfg.init_strategy = SolverConfig::Init::AllOnes;
  cfg.code_search = SolverConfig::CodeSearch::Frozen;
  DesignResult dr = alternate_minimize(en, cs, cfg);
  c.expect(dr.status == SolveStatus::Feasible, "design must be feasible");

  double max_df = 0;
  for (const auto& p : cs.pairs) max_df = std::max(max_df, p.delta_f);
  Codebook cb = merge_unresolved(build_codebook(en, dr.x.x, dr.code), cs,
                                 1e-6 * std::max(1.0, max_df));

  ChannelModel channel;
  NoiseModel silent{0.0, 0};
  std::mt19937_64 rng = make_engine({2});
  int exact = 0;
  for (int row = 0; row < en.num_rows(); ++row) {
    SimOutput sim =
        simulate(dr.x.x, dr.code, en.rows[row], en.level_count, channel, silent, rng);
    if (decode(sim.y, cb).value == en.output_values[row]) ++exact;
  }
  c.expect(exact == en.num_rows(), "every noiseless tuple must decode exactly");
}

// ---------------------------------------------------------------- criterion 3
// The repetition lower bound is enforced: slot counts under the bound are
// refused outright, the boundary is accepted, and spot values are exact.
void criterion3(Checker& c) {
  ConstraintSet single;
  single.pairs.push_back({0, 1, 1.0});
  c.expect(lmin_bound(single, 4, 2.0) == 2, "ceil(1*4/2) must be 2");
  ConstraintSet none;
  c.expect(lmin_bound(none, 4, 2.0) == 1, "no pairs means a single slot");

  QuantizedFunction f = QuantizedFunction::builtin(
      BuiltinFunction::Product, 4, {0, 1, 2, 3, 4, 5, 6, 7});
  InputEnumeration en = enumerate_inputs(f, EnumerationMode::Multiset);
  ConstraintSet cs = constraint_pairs(en, 6e-7);
  c.expect(lmin_bound(cs, en.vector_size(), 32.0) == 4,
           "product instance bound must be 4 at epsilon 6e-7");
  ConstraintSet cs_hi = constraint_pairs(en, 7e-7);
  c.expect(lmin_bound(cs_hi, en.vector_size(), 32.0) == 5,
           "product instance bound must be 5 at epsilon 7e-7");

  SolverConfig cfg;
  cfg.epsilon = 6e-7;
  cfg.p_max = 32;
  cfg.seed = 24;
  cfg.init_strategy = SolverConfig::Init::AllOnes;
  cfg.code_search = SolverConfig::CodeSearch::Frozen;

  cfg.slot_count = 3;
  bool refused = false;
  try {
    alternate_minimize(en, cs, cfg);
  } catch (const std::invalid_argument&) {
    refused = true;
  }
  c.expect(refused, "L = 3 sits under the bound and must be refused");

  cfg.slot_count = 4;
  try {
    DesignResult dr = alternate_minimize(en, cs, cfg);
    c.expect(dr.status == SolveStatus::Feasible, "boundary slot count must solve");
  } catch (const std::exception& e) {
    c.expect(false, std::string("boundary refused: ") + e.what());
  }
}

// ---------------------------------------------------------------- criterion 4
// The modulation subproblem reaches the analytic single-pair optimum, and
// branch-and-bound matches exhaustive code search on 100 seeded instances.
void criterion4(Checker& c) {
  Separation s;
  s.diff = {{0, 1.0}, {1, -1.0}};
  s.delta_f = 1.0;
  s.pair_index = 0;
  SolverConfig cfg;
  cfg.p_max = 4.0;
  ModulationSolve ms =
      solve_modulation_core(2, {s}, CodeMatrix::all_ones(2, 1), 4.0, cfg);
  c.expect(ms.status == SolveStatus::Feasible, "single pair must be feasible");
  c.expect(std::abs(ms.sdp_objective - 0.5) <= 1e-3,
           "single-pair trace must be 1/2 within 1e-3");

  auto mass = [](const Separation& sep, const Eigen::VectorXcd& x,
                 const Eigen::MatrixXi& bits) {
    double total = 0;
    for (int l = 0; l < bits.cols(); ++l) {
      std::complex<double> acc = 0;
      for (const auto& t : sep.diff)
        if (bits(t.index, l)) acc += t.coeff * x[t.index];
      total += std::norm(acc);
    }
    return total;
  };

  const int sizes[][2] = {{2, 2}, {3, 2}, {2, 4}, {4, 3}, {3, 4},
                          {4, 4}, {5, 3}, {3, 6}, {4, 5}, {5, 4}};
  int agreements = 0;
  for (int inst = 0; inst < 100; ++inst) {
    std::mt19937_64 rng = make_engine({0xacce97, static_cast<std::uint64_t>(inst)});
    int n = sizes[inst % 10][0];
    int l = sizes[inst % 10][1];

    Eigen::VectorXcd x(n);
    for (int i = 0; i < n; ++i)
      x[i] = std::complex<double>(2 * uniform01(rng) - 1, 2 * uniform01(rng) - 1);

    std::vector<Separation> seps;
    int sep_count = 1 + static_cast<int>(uniform01(rng) * 3);
    for (int k = 0; k < sep_count; ++k) {
      Separation sep;
      sep.pair_index = k;
      for (int i = 0; i < n; ++i) {
        double u = uniform01(rng);
        if (u < 1.0 / 3)
          sep.diff.push_back({i, 1.0});
        else if (u < 2.0 / 3)
          sep.diff.push_back({i, -1.0});
      }
      if (sep.diff.empty()) sep.diff.push_back({0, 1.0});
      std::complex<double> full = 0;
      for (const auto& t : sep.diff) full += t.coeff * x[t.index];
      double cap = std::max(1e-6, static_cast<double>(l) * std::norm(full));
      sep.delta_f = (0.2 + uniform01(rng)) * cap;
      seps.push_back(std::move(sep));
    }

    CodeSolve ex = solve_code_exhaustive(x, seps, n, l);
    CodeSolve bb = solve_code_branch_and_bound(x, seps, n, l, 2000000);
    if (ex.status != bb.status) {
      c.expect(false, "status disagreement on instance " + std::to_string(inst));
      return;
    }
    if (ex.status == SolveStatus::Feasible) {
      bool same = ex.code.ones_count() == bb.code.ones_count();
      bool valid = true;
      for (const auto& sep : seps) {
        valid = valid && mass(sep, x, ex.code.bits) >= sep.delta_f * (1 - 1e-9);
        valid = valid && mass(sep, x, bb.code.bits) >= sep.delta_f * (1 - 1e-9);
      }
      if (!(same && valid)) {
        c.expect(false, "optimum mismatch on instance " + std::to_string(inst));
        return;
      }
    }
    ++agreements;
  }
  c.expect(agreements == 100, "all 100 instances must agree");
}

// ---------------------------------------------------------------- criterion 5
// The alternation never increases its surrogate L*|x|^2 + sum |c_l|^2 on
// instances small enough for the exact code search.
void criterion5(Checker& c) {
  auto run = [&](BuiltinFunction kind, std::vector<double> values, int k,
                 double eps, int l) {
    QuantizedFunction f = QuantizedFunction::builtin(kind, k, values);
    InputEnumeration en = enumerate_inputs(f, EnumerationMode::Multiset);
    ConstraintSet cs = constraint_pairs(en, eps);
    SolverConfig cfg;
    cfg.epsilon = eps;
    cfg.p_max = 4.0 * k;
    cfg.slot_count = l;
    DesignResult dr = alternate_minimize(en, cs, cfg);
    c.expect(!dr.surrogate_trace.empty(), "alternation must record its surrogate");
    for (std::size_t i = 1; i < dr.surrogate_trace.size(); ++i)
      c.expect(dr.surrogate_trace[i] <= dr.surrogate_trace[i - 1] + 1e-9,
               "surrogate increased by more than 1e-9");
  };

  run(BuiltinFunction::Sum, {0, 1}, 2, 0.1, 1);
  run(BuiltinFunction::Sum, {0, 1}, 2, 0.1, 2);
  run(BuiltinFunction::Sum, {0, 1, 2}, 2, 0.02, 2);
  run(BuiltinFunction::Product, {1, 2}, 2, 0.05, 1);
  run(BuiltinFunction::Product, {1, 2, 3}, 2, 0.01, 2);
}

// ---------------------------------------------------------------- criterion 6
// NMSE against SNR for the coded product design: accurate at 35 dB, at least
// an order of magnitude worse at -5 dB, and non-increasing within 10% slack.
void criterion6(Checker& c) {
  ExperimentConfig cfgr;
  cfgr.function = BuiltinFunction::Product;
  cfgr.values = {0, 1, 2, 3};
  cfgr.node_count = 4;
  cfgr.slot_counts = {2};
  cfgr.snr_db = {-5, 0, 5, 10, 15, 20, 25, 30, 35};
  cfgr.trials = 100;
  cfgr.methods = {"rechcomp"};
  cfgr.epsilon = 3e-4;
  cfgr.seed = 7;

  NmseReport r = run_sweep(cfgr);
  std::vector<double> curve;
  for (double snr : cfgr.snr_db) curve.push_back(sweep_cell(r, "rechcomp", 2, snr));

  double high = curve.back();
  double low = curve.front();
  c.expect(high <= 1e-2, "NMSE at 35 dB must be at most 1e-2");
  c.expect(low >= 10.0 * high, "NMSE at -5 dB must be at least 10x the 35 dB value");
  for (std::size_t i = 1; i < curve.size(); ++i)
    c.expect(curve[i] <= curve[i - 1] * 1.10 + 1e-15,
             "curve must be non-increasing within 10% slack");
}

// ---------------------------------------------------------------- criterion 7
// Matched total budget L * P_max, product over {0..7}: the co-designed code
// is never worse than single-slot repetition at 15 dB, the dB gap does not
// shrink as L grows, and analog aggregation plateaus at least 10 dB above
// the coded design at 35 dB for L = 16.
void criterion7(Checker& c) {
  ExperimentConfig cfg;
  cfg.function = BuiltinFunction::Product;
  cfg.values = {0, 1, 2, 3, 4, 5, 6, 7};
  cfg.node_count = 4;
  cfg.slot_counts = {4, 8, 16};
  cfg.snr_db = {15, 35};
  cfg.trials = 2000;
  cfg.methods = {"rechcomp", "channelcomp", "aircomp"};
  cfg.epsilon = 6e-7;
  cfg.p_max = 32;
  cfg.seed = 24;
  cfg.tile_base_slots = 4;
  cfg.init = SolverConfig::Init::AllOnes;
  cfg.code_search = SolverConfig::CodeSearch::Frozen;

  NmseReport r = run_sweep(cfg);
  std::vector<double> gaps;
  for (int l : cfg.slot_counts) {
    double rech = sweep_cell(r, "rechcomp", l, 15);
    double chan = sweep_cell(r, "channelcomp", l, 15);
    c.expect(std::isfinite(rech) && std::isfinite(chan),
             "15 dB cells must produce numbers");
    c.expect(rech <= chan * (1 + 1e-12),
             "coded design must not lose to repetition at L=" + std::to_string(l));
    gaps.push_back(10.0 * std::log10(chan / rech));
  }
  for (std::size_t i = 1; i < gaps.size(); ++i)
    c.expect(gaps[i] >= gaps[i - 1] - 1e-12, "dB gap must be non-decreasing in L");

  double rech35 = sweep_cell(r, "rechcomp", 16, 35);
  double air35 = sweep_cell(r, "aircomp", 16, 35);
  c.expect(std::isfinite(rech35) && std::isfinite(air35),
           "35 dB cells must produce numbers");
  c.expect(air35 >= 10.0 * rech35,
           "analog aggregation must plateau at least 10 dB above the coded design");
}

// ---------------------------------------------------------------- criterion 8
// Channel statistics: sampled noise power matches sigma_z^2 within 5% over
// 1e5 draws, inverted fading with zero noise equals the ideal channel
// exactly, and the SNR conversion round-trips to 1e-12 dB.
void criterion8(Checker& c) {
  Eigen::VectorXcd x0(1);
  x0 << 0.0;
  CodeMatrix one = CodeMatrix::all_ones(1, 1);
  ChannelModel ideal;
  NoiseModel unit{1.0, 0};
  std::mt19937_64 rng = make_engine({88});
  double power = 0;
  const int reps = 100000;
  for (int t = 0; t < reps; ++t)
    power += std::norm(simulate(x0, one, {0}, 1, ideal, unit, rng).y[0]);
  power /= reps;
  c.expect(std::abs(power - 1.0) <= 0.05,
           "sampled noise power must match sigma^2 within 5%");

  Eigen::VectorXcd x(4);
  x << std::complex<double>(0.8, -0.6), std::complex<double>(-1.2, 0.4),
      std::complex<double>(0.1, 1.5), std::complex<double>(-0.7, -0.9);
  CodeMatrix code = CodeMatrix::bit_split(2, 2, 2);
  ChannelModel faded;
  faded.mode = ChannelModel::Mode::Rayleigh;
  NoiseModel silent{0.0, 0};
  bool equal = true;
  for (int t = 0; t < 64; ++t) {
    std::vector<int> levels = {t & 1, (t >> 1) & 1};
    std::mt19937_64 r1 = make_engine({9, static_cast<std::uint64_t>(t)});
    std::mt19937_64 r2 = make_engine({9, static_cast<std::uint64_t>(t)});
    SimOutput yi = simulate(x, code, levels, 2, ideal, silent, r1);
    SimOutput yf = simulate(x, code, levels, 2, faded, silent, r2);
    for (int l = 0; l < yi.y.size(); ++l) equal = equal && yi.y[l] == yf.y[l];
  }
  c.expect(equal, "inverted fading with zero noise must equal the ideal channel");

  for (double snr : {-12.5, -5.0, 0.0, 3.25, 15.0, 35.0, 60.0}) {
    double sigma = sigma_from_snr(x, snr);
    c.expect(std::abs(snr_from_sigma(x, sigma) - snr) <= 1e-12,
             "SNR round trip must hold to 1e-12 dB");
  }
}

// ---------------------------------------------------------------- criterion 9
// Two runs of the same sweep produce byte-identical CSV files.
void criterion9(Checker& c) {
  ExperimentConfig cfg;
  cfg.function = BuiltinFunction::Product;
  cfg.values = {0, 1, 2, 3};
  cfg.node_count = 4;
  cfg.slot_counts = {2, 4};
  cfg.snr_db = {0, 20, 35};
  cfg.trials = 50;
  cfg.methods = {"rechcomp", "channelcomp", "aircomp"};
  cfg.epsilon = 3e-4;
  cfg.seed = 11;

  NmseReport r1 = run_sweep(cfg);
  NmseReport r2 = run_sweep(cfg);
  write_csv(r1, "acceptance_sweep_a.csv");
  write_csv(r2, "acceptance_sweep_b.csv");

  auto slurp = [](const char* path) {
    std::ifstream is(path, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
  };
  std::string a = slurp("acceptance_sweep_a.csv");
  std::string b = slurp("acceptance_sweep_b.csv");
  c.expect(!a.empty(), "CSV output must not be empty");
  c.expect(a == b, "repeated runs must write byte-identical CSV");
  c.expect(a == to_csv(r1), "file contents must match the in-memory CSV");
  std::remove("acceptance_sweep_a.csv");
  std::remove("acceptance_sweep_b.csv");
}

struct Criterion {
  const char* label;
  double budget_seconds;
  std::function<void(Checker&)> body;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"worked example, exact arithmetic", 1.0, criterion1},
      {"noiseless round-trip, K=4 Q=8", 10.0, criterion2},
      {"repetition bound enforcement", 60.0, criterion3},
      {"modulation optimum and code search agreement", 60.0, criterion4},
      {"surrogate monotonicity", 60.0, criterion5},
      {"NMSE-vs-SNR trend", 120.0, criterion6},
      {"matched-budget baseline comparison", 600.0, criterion7},
      {"channel statistics", 60.0, criterion8},
      {"deterministic CSV", 120.0, criterion9},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Checker ck;
    auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].body(ck);
    } catch (const std::exception& e) {
      ck.expect(false, std::string("exception: ") + e.what());
    }
    double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    ck.expect(elapsed <= criteria[i].budget_seconds,
              "exceeded the time budget of " +
                  std::to_string(criteria[i].budget_seconds) + " s");

    std::printf("criterion %zu (%s): %s [%.2f s]%s%s\n", i + 1,
                criteria[i].label, ck.ok ? "PASS" : "FAIL", elapsed,
                ck.ok ? "" : " - ", ck.ok ? "" : ck.first_failure.c_str());
    if (!ck.ok) ++failures;
  }
  return failures;
}
