#include "rechcomp/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace rechcomp {

double quad_value(const SdpConstraint& c, const Eigen::VectorXcd& x) {
  double total = 0;
  for (const auto& u : c.factors) {
    std::complex<double> dot = 0;
    for (const auto& t : u) dot += t.coeff * x[t.index];
    total += std::norm(dot);
  }
  return total;
}

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

// Working-set sizing: most pair constraints are slack at the optimum, so the
// ADMM runs on the hardest rows and the set grows from violation sweeps over
// the full problem.
constexpr int kInitialActive = 256;
constexpr int kAddPerSweep = 64;
constexpr long kSweepEvery = 1000;
constexpr double kOverRelax = 1.6;

// Packed lower-triangle (svec) layout preserving inner products:
// <A, B> = svec(A) . svec(B).
struct SvecLayout {
  int n = 0;
  int dim() const { return n * (n + 1) / 2; }
  int pos(int r, int c) const {  // requires r >= c
    return c * n - c * (c - 1) / 2 + (r - c);
  }
};

using SparseRow = std::vector<std::pair<int, double>>;

Eigen::MatrixXd unpack(const SvecLayout& lay, const Eigen::VectorXd& v) {
  Eigen::MatrixXd m(lay.n, lay.n);
  for (int c = 0, t = 0; c < lay.n; ++c)
    for (int r = c; r < lay.n; ++r, ++t) {
      double val = (r == c) ? v[t] : v[t] / kSqrt2;
      m(r, c) = val;
      m(c, r) = val;
    }
  return m;
}

Eigen::VectorXd pack(const SvecLayout& lay, const Eigen::MatrixXd& m) {
  Eigen::VectorXd v(lay.dim());
  for (int c = 0, t = 0; c < lay.n; ++c)
    for (int r = c; r < lay.n; ++r, ++t) v[t] = (r == c) ? m(r, c) : m(r, c) * kSqrt2;
  return v;
}

// Dense B_p on the union support of its factors, emitted as an svec row.
SparseRow constraint_row(const SvecLayout& lay, const SdpConstraint& c) {
  std::vector<int> sup;
  for (const auto& u : c.factors)
    for (const auto& t : u) sup.push_back(t.index);
  std::sort(sup.begin(), sup.end());
  sup.erase(std::unique(sup.begin(), sup.end()), sup.end());
  const int s = static_cast<int>(sup.size());
  std::vector<int> slot(lay.n, -1);
  for (int i = 0; i < s; ++i) slot[sup[i]] = i;

  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(s, s);
  Eigen::VectorXd u_local(s);
  for (const auto& u : c.factors) {
    u_local.setZero();
    for (const auto& t : u) u_local[slot[t.index]] += t.coeff;
    b += u_local * u_local.transpose();
  }

  SparseRow row;
  row.reserve(s * (s + 1) / 2);
  for (int ci = 0; ci < s; ++ci)
    for (int ri = ci; ri < s; ++ri) {
      double val = b(ri, ci);
      if (val == 0.0) continue;
      row.push_back({lay.pos(sup[ri], sup[ci]), (ri == ci) ? val : val * kSqrt2});
    }
  return row;
}

double row_dot(const SparseRow& row, const Eigen::VectorXd& v) {
  double d = 0;
  for (const auto& [i, c] : row) d += c * v[i];
  return d;
}

}  // namespace

TraceSdpResult solve_trace_min_sdp(int n, const std::vector<SdpConstraint>& constraints,
                                   double trace_cap, const TraceSdpOptions& options) {
  TraceSdpResult res;
  if (trace_cap <= 0) throw std::invalid_argument("trace cap must be positive");
  if (constraints.empty()) {
    res.w = Eigen::MatrixXd::Zero(n, n);
    res.status = SolveStatus::Feasible;
    return res;
  }

  SvecLayout lay{n};
  const int m = lay.dim();
  const int np = static_cast<int>(constraints.size());

  std::vector<SparseRow> a(np + 1);
  Eigen::VectorXd scale(np + 1), rhs(np + 1);
  for (int p = 0; p < np; ++p) {
    a[p] = constraint_row(lay, constraints[p]);
    double nrm = 0;
    for (const auto& [i, c] : a[p]) nrm += c * c;
    nrm = std::sqrt(nrm);
    if (nrm == 0.0) {
      // B = 0 with a positive requirement: no W can help.
      res.status = SolveStatus::Infeasible;
      res.worst_pair = constraints[p].pair_index;
      res.w = Eigen::MatrixXd::Zero(n, n);
      res.dual_bound = std::numeric_limits<double>::infinity();
      res.gap = res.dual_bound;
      return res;
    }
    for (auto& [i, c] : a[p]) c /= nrm;
    scale[p] = nrm;
    rhs[p] = constraints[p].rhs / nrm;
  }
  {
    SparseRow tr;
    for (int i = 0; i < n; ++i) tr.push_back({lay.pos(i, i), 1.0});
    double nrm = std::sqrt(static_cast<double>(n));
    for (auto& [i, c] : tr) c /= nrm;
    a[np] = tr;
    scale[np] = nrm;
    rhs[np] = trace_cap / nrm;
  }

  // Seed the working set with the hardest rows: requirement per unit of row
  // norm.
  std::vector<int> by_demand(np);
  std::iota(by_demand.begin(), by_demand.end(), 0);
  std::stable_sort(by_demand.begin(), by_demand.end(),
                   [&](int x, int y) { return rhs[x] > rhs[y]; });
  std::vector<int> active;
  std::vector<char> in_active(np, 0);
  for (int i = 0; i < np && i < kInitialActive; ++i) {
    active.push_back(by_demand[i]);
    in_active[by_demand[i]] = 1;
  }

  Eigen::VectorXd cobj = Eigen::VectorXd::Zero(m);
  for (int i = 0; i < n; ++i) cobj[lay.pos(i, i)] = 1.0;

  Eigen::VectorXd w = Eigen::VectorXd::Zero(m), s = w, u = w;
  Eigen::VectorXd z = Eigen::VectorXd::Zero(np + 1), v = z;
  double rho = options.rho;

  // The w-update system I + A^T A depends only on the working set, not on
  // rho, so penalty rescaling is free and refactorization happens only when
  // rows are added.
  Eigen::LLT<Eigen::MatrixXd> llt;
  auto refactor = [&] {
    Eigen::MatrixXd normal = Eigen::MatrixXd::Identity(m, m);
    auto accumulate = [&](const SparseRow& row) {
      for (const auto& [i, ci] : row)
        for (const auto& [j, cj] : row) normal(i, j) += ci * cj;
    };
    for (int p : active) accumulate(a[p]);
    accumulate(a[np]);
    llt.compute(normal);
  };
  refactor();

  Eigen::VectorXd rhs_active;
  auto reload_rhs = [&] {
    rhs_active.resize(active.size() + 1);
    for (std::size_t i = 0; i < active.size(); ++i) rhs_active[i] = rhs[active[i]];
    rhs_active[active.size()] = rhs[np];
  };
  reload_rhs();

  auto apply_a = [&](const Eigen::VectorXd& x) {
    Eigen::VectorXd out(active.size() + 1);
    for (std::size_t i = 0; i < active.size(); ++i) out[i] = row_dot(a[active[i]], x);
    out[active.size()] = row_dot(a[np], x);
    return out;
  };

  const double big = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd w_best;  // feasible for the full row set
  double obj_best = big;
  double dual_best = -big;
  double worst_violation = big;
  int worst_pair = constraints[0].pair_index;

  // Evaluates the candidate against every row.  The working-set-calibrated
  // copy (alpha_sub) reveals which inactive rows the relaxation misses; the
  // full-set rescale (alpha over all rows) yields a feasible incumbent
  // whenever it fits under the trace cap.  Violated rows join the working
  // set.  Returns the number of rows added.
  auto sweep_rows = [&](const Eigen::MatrixXd& cand, const Eigen::VectorXd& packed,
                        double alpha_sub) {
    double alpha_full = 0;
    bool scalable = true;
    double worst = 0;
    int worst_p = 0;
    std::vector<std::pair<double, int>> misses;
    for (int p = 0; p < np; ++p) {
      double raw = row_dot(a[p], packed) * scale[p];
      double want = constraints[p].rhs;
      if (raw <= 0)
        scalable = false;
      else
        alpha_full = std::max(alpha_full, want / raw);
      double miss = want - alpha_sub * raw;
      if (miss > worst) {
        worst = miss;
        worst_p = p;
      }
      if (!in_active[p] && miss > 1e-12 * std::max(1.0, want))
        misses.push_back({miss / std::max(1.0, want), p});
    }
    if (worst < worst_violation) {
      worst_violation = worst;
      worst_pair = constraints[worst_p].pair_index;
    }
    double tr = cand.trace();
    if (scalable && alpha_full * tr <= trace_cap * (1 + 1e-12) &&
        alpha_full * tr < obj_best) {
      obj_best = alpha_full * tr;
      w_best = alpha_full * cand;
    }
    if (misses.empty()) return 0;
    std::size_t take = std::min<std::size_t>(misses.size(), kAddPerSweep);
    std::partial_sort(misses.begin(), misses.begin() + take, misses.end(),
                      std::greater<>());
    for (std::size_t i = 0; i < take; ++i) {
      active.push_back(misses[i].second);
      in_active[misses[i].second] = 1;
    }
    refactor();
    reload_rhs();
    return static_cast<int>(take);
  };

  const long check_every = 25;
  Eigen::MatrixXd sm;
  long iter = 0;
  bool done = false;
  for (; iter < options.max_iters && !done; ++iter) {
    const std::size_t na = active.size();

    Eigen::VectorXd za(na + 1), va(na + 1);
    for (std::size_t i = 0; i < na; ++i) {
      za[i] = z[active[i]];
      va[i] = v[active[i]];
    }
    za[na] = z[np];
    va[na] = v[np];

    Eigen::VectorXd atzv = Eigen::VectorXd::Zero(m);
    for (std::size_t i = 0; i < na; ++i)
      for (const auto& [j, c] : a[active[i]]) atzv[j] += c * (za[i] - va[i]);
    for (const auto& [j, c] : a[np]) atzv[j] += c * (za[na] - va[na]);

    w = llt.solve((s - u) + atzv - cobj / rho);

    // Over-relaxed consensus updates.
    Eigen::VectorXd w_hat = kOverRelax * w + (1 - kOverRelax) * s;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(unpack(lay, w_hat + u));
    sm = es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).asDiagonal() *
         es.eigenvectors().transpose();
    Eigen::VectorXd s_new = pack(lay, sm);
    double s_delta = (s_new - s).squaredNorm();
    u += w_hat - s_new;
    s = s_new;

    Eigen::VectorXd aw = apply_a(w);
    Eigen::VectorXd aw_hat = kOverRelax * aw + (1 - kOverRelax) * za;
    Eigen::VectorXd z_new = aw_hat + va;
    for (std::size_t i = 0; i < na; ++i) z_new[i] = std::max(z_new[i], rhs_active[i]);
    z_new[na] = std::min(z_new[na], rhs_active[na]);
    va += aw_hat - z_new;
    double z_delta = 0;
    for (std::size_t i = 0; i <= na; ++i) {
      double d = z_new[i] - za[i];
      z_delta += d * d;
    }
    for (std::size_t i = 0; i < na; ++i) {
      z[active[i]] = z_new[i];
      v[active[i]] = va[i];
    }
    z[np] = z_new[na];
    v[np] = va[na];

    if ((iter + 1) % check_every != 0) continue;

    // Relative residuals; the stop below insists on a settled fixed point so
    // the returned W has the low-rank structure rounding relies on, not just
    // a near-optimal trace.
    double settle_ref = std::max(1.0, s.norm());
    double rp = (w - s).norm() / settle_ref;
    double rd = rho * std::sqrt(s_delta + z_delta) / settle_ref;
    bool settled = rp <= 1e-6 && rd <= 1e-6;

    // Primal candidate: rescale the PSD iterate onto the working set.
    Eigen::VectorXd pv = apply_a(s);
    double alpha = 0;
    bool scalable = true;
    for (std::size_t i = 0; i < na; ++i) {
      int p = active[i];
      double raw = pv[i] * scale[p];
      if (raw <= 0) {
        if (constraints[p].rhs > 0) scalable = false;
        continue;
      }
      alpha = std::max(alpha, constraints[p].rhs / raw);
    }
    double tr = sm.trace();
    double subset_obj =
        (scalable && alpha * tr <= trace_cap * (1 + 1e-12)) ? alpha * tr : big;

    // Certified dual bound from clamped multipliers; inactive rows carry a
    // zero multiplier, so the bound is valid for the full problem.
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    double lin = 0;
    for (int p : active) {
      double lambda = std::max(0.0, -rho * v[p]) / scale[p];
      if (lambda == 0.0) continue;
      lin += lambda * constraints[p].rhs;
      for (const auto& uf : constraints[p].factors)
        for (const auto& t1 : uf)
          for (const auto& t2 : uf)
            h(t1.index, t2.index) += lambda * t1.coeff * t2.coeff;
    }
    double mu = std::max(0.0, rho * v[np]) / scale[np];
    double eigmax = 0;
    if (lin > 0) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eh(h, Eigen::EigenvaluesOnly);
      eigmax = eh.eigenvalues().maxCoeff();
    }
    double mu_cert = std::max(mu, std::max(0.0, eigmax - 1.0));
    dual_best = std::max(dual_best, lin - mu_cert * trace_cap);

    if (dual_best > trace_cap * (1 + 1e-9) + 1e-12) {
      res.status = SolveStatus::Infeasible;
      res.worst_pair = worst_pair;
      res.w = Eigen::MatrixXd::Zero(n, n);
      res.dual_bound = dual_best;
      res.gap = big;
      res.iterations = iter + 1;
      return res;
    }

    // Sweep the full row set once the working set looks solved (or on the
    // slow cadence as a safety net); stop when a full-feasible incumbent
    // meets the accuracy target.
    bool subset_settled =
        settled && subset_obj < big && subset_obj - dual_best <= 0.5 * options.accuracy;
    if (subset_settled || (iter + 1) % kSweepEvery == 0) {
      int added = sweep_rows(sm, s, subset_obj < big ? alpha : 0.0);
      if (subset_settled && added == 0 && obj_best - dual_best <= options.accuracy)
        done = true;
    }

    if (done) continue;
    if (rp > 10 * rd && rho < 1e8) {
      rho *= 2;
      u /= 2;
      v /= 2;
    } else if (rd > 10 * rp && rho > 1e-8) {
      rho /= 2;
      u *= 2;
      v *= 2;
    }
  }

  res.iterations = iter;
  if (obj_best == big && sm.size()) sweep_rows(sm, s, 0.0);
  if (obj_best == big) {
    res.status = SolveStatus::Infeasible;
    res.worst_pair = worst_pair;
    res.w = Eigen::MatrixXd::Zero(n, n);
    res.dual_bound = dual_best;
    res.gap = big;
    return res;
  }
  res.status = SolveStatus::Feasible;
  res.w = w_best;
  res.objective = obj_best;
  res.dual_bound = dual_best;
  res.gap = obj_best - dual_best;
  res.worst_pair = -1;
  return res;
}

}  // namespace rechcomp
