#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <stdexcept>

#include "rechcomp/codesign.hpp"

namespace rechcomp {

namespace {

struct PairData {
  std::vector<std::pair<int, std::complex<double>>> entries;  // (index, diff * x)
  double delta = 0;
  int pair_index = -1;
};

// The modulation step rescales x so binding pairs sit exactly on their
// requirement; a hair of relative slack keeps rounding from turning those
// boundary cases into spurious infeasibility.  Both solvers see the same
// slacked targets, so their objectives stay comparable.
constexpr double kAcceptSlack = 1.0 - 1e-9;

std::vector<PairData> weighted_pairs(const Eigen::VectorXcd& x,
                                     const std::vector<Separation>& seps) {
  std::vector<PairData> out;
  out.reserve(seps.size());
  for (const auto& s : seps) {
    PairData p;
    p.delta = s.delta_f * kAcceptSlack;
    p.pair_index = s.pair_index;
    for (const auto& t : s.diff) {
      std::complex<double> w = t.coeff * x[t.index];
      if (w != std::complex<double>(0, 0)) p.entries.push_back({t.index, w});
    }
    out.push_back(std::move(p));
  }
  return out;
}

// max over activation subsets of sum_l |d^H c_l|^2, bounded componentwise.
double slot_upper_bound(const PairData& p) {
  double pos_re = 0, neg_re = 0, pos_im = 0, neg_im = 0;
  for (const auto& [idx, w] : p.entries) {
    (void)idx;
    if (w.real() > 0) pos_re += w.real(); else neg_re -= w.real();
    if (w.imag() > 0) pos_im += w.imag(); else neg_im -= w.imag();
  }
  double mre = std::max(pos_re, neg_re);
  double mim = std::max(pos_im, neg_im);
  return mre * mre + mim * mim;
}

CodeMatrix mask_to_code(std::uint32_t mask, int n, int l) {
  CodeMatrix c = CodeMatrix::zeros(n, l);
  for (int slot = 0; slot < l; ++slot)
    for (int idx = 0; idx < n; ++idx)
      if (mask >> (slot * n + idx) & 1u) c.bits(idx, slot) = 1;
  return c;
}

double mask_lhs(const PairData& p, std::uint32_t mask, int n, int l) {
  double lhs = 0;
  for (int slot = 0; slot < l; ++slot) {
    std::complex<double> dot = 0;
    std::uint32_t shifted = mask >> (slot * n);
    for (const auto& [idx, w] : p.entries)
      if (shifted >> idx & 1u) dot += w;
    lhs += std::norm(dot);
  }
  return lhs;
}

}  // namespace

CodeSolve solve_code_exhaustive(const Eigen::VectorXcd& x,
                                const std::vector<Separation>& seps, int n,
                                int slot_count) {
  const int nl = n * slot_count;
  if (nl > 30) throw std::invalid_argument("exhaustive code search limited to n*l <= 30");

  CodeSolve res;
  if (seps.empty()) {
    res.code = CodeMatrix::zeros(n, slot_count);
    res.status = SolveStatus::Feasible;
    return res;
  }

  std::vector<PairData> pairs = weighted_pairs(x, seps);
  for (const auto& p : pairs) {
    if (slot_count * slot_upper_bound(p) < p.delta) {
      res.status = SolveStatus::Infeasible;
      res.code = CodeMatrix::zeros(n, slot_count);
      return res;
    }
  }
  // Hardest constraints first so infeasible candidates die early.
  std::vector<double> difficulty(pairs.size());
  for (std::size_t p = 0; p < pairs.size(); ++p)
    difficulty[p] = pairs[p].delta / (slot_count * slot_upper_bound(pairs[p]) + 1e-300);
  std::vector<int> order(pairs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return difficulty[a] > difficulty[b]; });

  const std::uint32_t limit = 1u << nl;
  for (int t = 0; t <= nl; ++t) {
    // Gosper's hack: t-subsets in ascending numeric order, so the first
    // feasible candidate carries the minimal activation count.
    std::uint32_t mask = (t == 0) ? 0 : ((1u << t) - 1);
    while (mask < limit) {
      ++res.nodes_used;
      bool ok = true;
      for (int p : order) {
        if (mask_lhs(pairs[p], mask, n, slot_count) < pairs[p].delta) {
          ok = false;
          break;
        }
      }
      if (ok) {
        res.code = mask_to_code(mask, n, slot_count);
        res.status = SolveStatus::Feasible;
        return res;
      }
      if (t == 0) break;
      std::uint32_t c = mask & -mask;
      std::uint32_t r = mask + c;
      mask = (((r ^ mask) >> 2) / c) | r;
    }
  }
  res.status = SolveStatus::Infeasible;
  res.code = CodeMatrix::zeros(n, slot_count);
  return res;
}

namespace {

// Depth-first search over slot activations.  Bounds come from the concave
// envelope of each bilinear product c_a c_b (McCormick): a free activation a
// in slot l can raise constraint p by at most
//   |d_a|^2 + 2 max(0, Re(conj(sigma_pl) d_a)) + sum_b max(0, Re(conj(d_a) d_b))
// over free b in the same slot, which upper-bounds any completion.
struct BbSolver {
  int n = 0, l = 0;
  long node_limit = 0;
  std::vector<PairData> pairs;
  // per pair, sparse position of each index and pairwise cross terms
  std::vector<std::vector<double>> cross;  // Re(conj(d_a) d_b), nnz x nnz
  std::vector<std::vector<int>> var_index;  // n -> local entry or -1, per pair

  std::vector<signed char> assign;  // n*l entries, -1 free
  std::vector<std::vector<std::complex<double>>> sigma;  // [pair][slot]
  int ones = 0;
  long nodes = 0;
  bool budget_hit = false;

  int best_ones = 0;
  bool have_best = false;
  std::vector<signed char> best_assign;

  int var(int idx, int slot) const { return slot * n + idx; }

  void flip(int idx, int slot, int dir) {
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      int loc = var_index[p][idx];
      if (loc >= 0) sigma[p][slot] += double(dir) * pairs[p].entries[loc].second;
    }
    ones += dir;
  }

  void record_best() {
    best_ones = ones;
    have_best = true;
    best_assign = assign;
    for (auto& a : best_assign)
      if (a < 0) a = 0;
  }

  void search() {
    if (budget_hit) return;
    if (++nodes > node_limit) {
      budget_hit = true;
      return;
    }
    if (have_best && ones >= best_ones) return;

    // Deficits under the all-free-zero completion.
    bool feasible_now = true;
    std::vector<double> deficit(pairs.size(), 0.0);
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      double lhs = 0;
      for (int s = 0; s < l; ++s) lhs += std::norm(sigma[p][s]);
      deficit[p] = pairs[p].delta - lhs;
      if (deficit[p] > 0) feasible_now = false;
    }
    if (feasible_now) {
      record_best();
      return;
    }

    // Envelope gains for every free variable against every deficient pair.
    int extra_needed = 1;
    std::vector<double> impact(static_cast<std::size_t>(n) * l, 0.0);
    std::vector<double> gain_buf;
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      if (deficit[p] <= 0) continue;
      gain_buf.clear();
      double total_gain = 0;
      const auto& pe = pairs[p].entries;
      for (int s = 0; s < l; ++s) {
        for (std::size_t a = 0; a < pe.size(); ++a) {
          if (assign[var(pe[a].first, s)] != -1) continue;
          const std::complex<double>& da = pe[a].second;
          double g = std::norm(da) +
                     2 * std::max(0.0, sigma[p][s].real() * da.real() +
                                           sigma[p][s].imag() * da.imag());
          for (std::size_t b = 0; b < pe.size(); ++b) {
            if (b == a || assign[var(pe[b].first, s)] != -1) continue;
            g += std::max(0.0, cross[p][a * pe.size() + b]);
          }
          gain_buf.push_back(g);
          total_gain += g;
          impact[var(pe[a].first, s)] += std::min(g, deficit[p]);
        }
      }
      if (total_gain < deficit[p]) return;  // no completion can satisfy p
      std::sort(gain_buf.begin(), gain_buf.end(), std::greater<double>());
      double acc = 0;
      int need = 0;
      for (double g : gain_buf) {
        acc += g;
        ++need;
        if (acc >= deficit[p]) break;
      }
      extra_needed = std::max(extra_needed, need);
    }
    if (have_best && ones + extra_needed >= best_ones) return;

    int pick = -1;
    double best_impact = -1;
    for (int vi = 0; vi < n * l; ++vi) {
      if (assign[vi] != -1) continue;
      if (impact[vi] > best_impact) {
        best_impact = impact[vi];
        pick = vi;
      }
    }
    if (pick < 0) return;  // nothing free can help

    int idx = pick % n, slot = pick / n;
    assign[pick] = 0;
    search();
    assign[pick] = 1;
    flip(idx, slot, +1);
    if (!budget_hit) search();
    flip(idx, slot, -1);
    assign[pick] = -1;
  }
};

}  // namespace

CodeSolve solve_code_branch_and_bound(const Eigen::VectorXcd& x,
                                      const std::vector<Separation>& seps, int n,
                                      int slot_count, long node_limit,
                                      const CodeMatrix* incumbent) {
  CodeSolve res;
  if (seps.empty()) {
    res.code = CodeMatrix::zeros(n, slot_count);
    res.status = SolveStatus::Feasible;
    return res;
  }

  BbSolver bb;
  bb.n = n;
  bb.l = slot_count;
  bb.node_limit = node_limit;
  bb.pairs = weighted_pairs(x, seps);
  bb.cross.resize(bb.pairs.size());
  bb.var_index.assign(bb.pairs.size(), std::vector<int>(n, -1));
  for (std::size_t p = 0; p < bb.pairs.size(); ++p) {
    const auto& pe = bb.pairs[p].entries;
    bb.cross[p].resize(pe.size() * pe.size());
    for (std::size_t a = 0; a < pe.size(); ++a) {
      bb.var_index[p][pe[a].first] = static_cast<int>(a);
      for (std::size_t b = 0; b < pe.size(); ++b)
        bb.cross[p][a * pe.size() + b] =
            pe[a].second.real() * pe[b].second.real() +
            pe[a].second.imag() * pe[b].second.imag();
    }
  }
  bb.assign.assign(static_cast<std::size_t>(n) * slot_count, -1);
  bb.sigma.assign(bb.pairs.size(), std::vector<std::complex<double>>(slot_count, 0.0));

  // Variables outside every constraint support only cost activations; pin
  // them to zero so the search handles the decisive ones.
  std::vector<bool> active(n, false);
  for (const auto& p : bb.pairs)
    for (const auto& [idx, w] : p.entries) active[idx] = true;
  for (int idx = 0; idx < n; ++idx)
    if (!active[idx])
      for (int s = 0; s < slot_count; ++s) bb.assign[bb.var(idx, s)] = 0;

  if (incumbent != nullptr && incumbent->rows() == n &&
      incumbent->slots() == slot_count) {
    bool ok = true;
    for (const auto& p : bb.pairs) {
      double lhs = 0;
      for (int s = 0; s < slot_count; ++s) {
        std::complex<double> dot = 0;
        for (const auto& [idx, w] : p.entries)
          if (incumbent->bits(idx, s)) dot += w;
        lhs += std::norm(dot);
      }
      if (lhs < p.delta) {
        ok = false;
        break;
      }
    }
    if (ok) {
      bb.have_best = true;
      bb.best_ones = incumbent->ones_count();
      bb.best_assign.assign(bb.assign.size(), 0);
      for (int idx = 0; idx < n; ++idx)
        for (int s = 0; s < slot_count; ++s)
          bb.best_assign[bb.var(idx, s)] =
              static_cast<signed char>(incumbent->bits(idx, s));
    }
  }

  bb.search();
  res.nodes_used = bb.nodes;

  if (!bb.have_best) {
    res.code = CodeMatrix::zeros(n, slot_count);
    res.status = bb.budget_hit ? SolveStatus::BudgetExhausted : SolveStatus::Infeasible;
    return res;
  }
  res.code = CodeMatrix::zeros(n, slot_count);
  for (int idx = 0; idx < n; ++idx)
    for (int s = 0; s < slot_count; ++s)
      res.code.bits(idx, s) = bb.best_assign[bb.var(idx, s)];
  res.status = bb.budget_hit ? SolveStatus::BudgetExhausted : SolveStatus::Feasible;
  return res;
}

CodeSolve solve_code_subproblem(const Eigen::VectorXcd& x,
                                const std::vector<Separation>& seps, int n,
                                int slot_count, const SolverConfig& cfg,
                                const CodeMatrix* incumbent) {
  if (n * slot_count <= cfg.exhaustive_threshold)
    return solve_code_exhaustive(x, seps, n, slot_count);
  return solve_code_branch_and_bound(x, seps, n, slot_count, cfg.bb_node_limit,
                                     incumbent);
}

}  // namespace rechcomp
