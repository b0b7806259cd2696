#include "rechcomp/codesign.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

#include "rechcomp/rng.hpp"
#include "rechcomp/sdp.hpp"

namespace rechcomp {

const char* status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Feasible: return "feasible";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::BudgetExhausted: return "budget_exhausted";
  }
  return "unknown";
}

CodeMatrix CodeMatrix::zeros(int n, int l) {
  CodeMatrix c;
  c.bits = Eigen::MatrixXi::Zero(n, l);
  return c;
}

CodeMatrix CodeMatrix::all_ones(int n, int l) {
  CodeMatrix c;
  c.bits = Eigen::MatrixXi::Ones(n, l);
  return c;
}

CodeMatrix CodeMatrix::bit_split(int node_count, int level_count, int l) {
  CodeMatrix c = zeros(node_count * level_count, l);
  for (int k = 0; k < node_count; ++k)
    for (int q = 0; q < level_count; ++q) c.bits(k * level_count + q, q % l) = 1;
  return c;
}

std::vector<std::string> CodeMatrix::row_strings() const {
  std::vector<std::string> out;
  out.reserve(rows());
  for (int r = 0; r < rows(); ++r) {
    std::string s(slots(), '0');
    for (int l = 0; l < slots(); ++l)
      if (bits(r, l)) s[l] = '1';
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<Separation> build_separations(const InputEnumeration& enumeration,
                                          const ConstraintSet& constraints) {
  const int q = enumeration.level_count;
  std::vector<Separation> seps;
  seps.reserve(constraints.pairs.size());
  for (std::size_t p = 0; p < constraints.pairs.size(); ++p) {
    const auto& pr = constraints.pairs[p];
    Separation s;
    s.delta_f = pr.delta_f;
    s.pair_index = static_cast<int>(p);
    for (int k = 0; k < enumeration.node_count; ++k) {
      int qi = enumeration.rows[pr.i][k];
      int qj = enumeration.rows[pr.j][k];
      if (qi == qj) continue;
      s.diff.push_back({k * q + qi, 1.0});
      s.diff.push_back({k * q + qj, -1.0});
    }
    std::sort(s.diff.begin(), s.diff.end(),
              [](const DiffTerm& a, const DiffTerm& b) { return a.index < b.index; });
    seps.push_back(std::move(s));
  }
  return seps;
}

std::vector<Separation> reduced_separations(const InputEnumeration& enumeration,
                                            const ConstraintSet& constraints) {
  const int q = enumeration.level_count;
  std::vector<Separation> seps;
  seps.reserve(constraints.pairs.size());
  std::vector<int> cnt(q);
  for (std::size_t p = 0; p < constraints.pairs.size(); ++p) {
    const auto& pr = constraints.pairs[p];
    std::fill(cnt.begin(), cnt.end(), 0);
    for (int lev : enumeration.rows[pr.i]) ++cnt[lev];
    for (int lev : enumeration.rows[pr.j]) --cnt[lev];
    Separation s;
    s.delta_f = pr.delta_f;
    s.pair_index = static_cast<int>(p);
    for (int lev = 0; lev < q; ++lev)
      if (cnt[lev] != 0) s.diff.push_back({lev, static_cast<double>(cnt[lev])});
    seps.push_back(std::move(s));
  }
  return seps;
}

std::vector<Separation> dominant_separations(std::vector<Separation> seps) {
  std::map<std::string, std::size_t> seen;
  std::vector<Separation> out;
  out.reserve(seps.size());
  char buf[48];
  for (auto& s : seps) {
    double flip = 1.0;
    if (!s.diff.empty() && s.diff.front().coeff < 0) flip = -1.0;
    std::string key;
    for (const auto& t : s.diff) {
      std::snprintf(buf, sizeof buf, "%d:%.17g;", t.index, flip * t.coeff);
      key += buf;
    }
    auto it = seen.find(key);
    if (it == seen.end()) {
      seen.emplace(std::move(key), out.size());
      out.push_back(std::move(s));
    } else if (s.delta_f > out[it->second].delta_f) {
      out[it->second].delta_f = s.delta_f;
      out[it->second].pair_index = s.pair_index;
    }
  }
  return out;
}

int lmin_bound(const ConstraintSet& constraints, int n, double p_max) {
  if (p_max <= 0) throw std::invalid_argument("power cap must be positive");
  if (n <= 0) throw std::invalid_argument("vector size must be positive");
  double max_df = 0;
  for (const auto& p : constraints.pairs) max_df = std::max(max_df, p.delta_f);
  double bound = std::ceil(max_df * static_cast<double>(n) / p_max);
  return std::max(1, static_cast<int>(bound));
}

PairMatrixMap build_pair_matrices(const InputEnumeration& enumeration,
                                  const CodeMatrix& code) {
  const int n = enumeration.vector_size();
  if (code.rows() != n)
    throw std::invalid_argument("code row count does not match enumeration");
  const long m = enumeration.num_rows();
  if (m * (m - 1) / 2 > 20000)
    throw std::length_error("pair matrix map too large; use alternate_minimize");

  PairMatrixMap out;
  Eigen::VectorXd diff(n), u(n);
  for (int i = 0; i < m; ++i) {
    auto si = enumeration.support(i);
    for (int j = i + 1; j < m; ++j) {
      auto sj = enumeration.support(j);
      diff.setZero();
      for (int k = 0; k < enumeration.node_count; ++k) {
        if (si[k] == sj[k]) continue;
        diff[si[k]] += 1.0;
        diff[sj[k]] -= 1.0;
      }
      Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
      for (int l = 0; l < code.slots(); ++l) {
        for (int t = 0; t < n; ++t) u[t] = code.bits(t, l) ? diff[t] : 0.0;
        b.noalias() += u * u.transpose();
      }
      out.emplace(std::make_pair(i, j), std::move(b));
    }
  }
  return out;
}

namespace {

std::vector<SdpConstraint> masked_constraints(const std::vector<Separation>& seps,
                                              const CodeMatrix& code) {
  std::vector<SdpConstraint> cs;
  cs.reserve(seps.size());
  for (const auto& s : seps) {
    SdpConstraint c;
    c.rhs = s.delta_f;
    c.pair_index = s.pair_index;
    for (int l = 0; l < code.slots(); ++l) {
      std::vector<DiffTerm> u;
      for (const auto& t : s.diff)
        if (code.bits(t.index, l)) u.push_back(t);
      if (!u.empty()) c.factors.push_back(std::move(u));
    }
    cs.push_back(std::move(c));
  }
  return cs;
}

TraceSdpOptions sdp_options(double p_max, const SolverConfig& cfg) {
  TraceSdpOptions opt;
  opt.accuracy = cfg.sdp_accuracy > 0 ? cfg.sdp_accuracy : 1e-6 * std::max(1.0, p_max);
  if (cfg.sdp_max_iters > 0) opt.max_iters = cfg.sdp_max_iters;
  return opt;
}

ModulationSolve extract_modulation(const TraceSdpResult& sdp,
                                   const std::vector<SdpConstraint>& constraints,
                                   double p_max, const SolverConfig& cfg) {
  ModulationSolve ms;
  ms.sdp_objective = sdp.objective;
  ms.duality_gap = sdp.gap;
  ms.iterations = sdp.iterations;
  ms.worst_pair = sdp.worst_pair;
  const int n = static_cast<int>(sdp.w.rows());
  ms.lifted.w = sdp.w.cast<std::complex<double>>();
  ms.x.p_max = p_max;
  if (sdp.status != SolveStatus::Feasible) {
    ms.status = sdp.status;
    ms.x.x = Eigen::VectorXcd::Zero(n);
    return ms;
  }
  if (constraints.empty()) {
    ms.status = SolveStatus::Feasible;
    ms.rank_one = true;
    ms.x.x = Eigen::VectorXcd::Zero(n);
    return ms;
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sdp.w);
  const Eigen::VectorXd& lam = es.eigenvalues();  // ascending
  double trace = sdp.w.trace();
  double lam2 = (n >= 2) ? lam[n - 2] : 0.0;

  auto rescale_feasible = [&](Eigen::VectorXcd x) -> std::pair<bool, Eigen::VectorXcd> {
    double factor_sq = 0;
    for (const auto& c : constraints) {
      double q = quad_value(c, x);
      if (q <= 0) {
        if (c.rhs > 0) return {false, x};
        continue;
      }
      factor_sq = std::max(factor_sq, c.rhs / q);
    }
    x *= std::sqrt(factor_sq);
    if (x.squaredNorm() > p_max * (1 + 1e-9)) return {false, x};
    return {true, x};
  };

  if (lam2 <= 1e-6 * std::max(trace, 0.0)) {
    Eigen::VectorXcd x =
        (std::sqrt(std::max(lam[n - 1], 0.0)) * es.eigenvectors().col(n - 1))
            .cast<std::complex<double>>();
    auto [ok, xr] = rescale_feasible(std::move(x));
    if (ok) {
      ms.status = SolveStatus::Feasible;
      ms.rank_one = true;
      ms.x.x = std::move(xr);
      return ms;
    }
  }

  // A complex vector v1 + i v2 carries the lifting v1 v1^T + v2 v2^T exactly,
  // so the top two eigenpairs give a deterministic candidate that is lossless
  // whenever W is (near) rank two.
  if (n >= 2) {
    Eigen::VectorXcd x =
        (std::sqrt(std::max(lam[n - 1], 0.0)) * es.eigenvectors().col(n - 1))
            .cast<std::complex<double>>() +
        std::complex<double>(0, 1) *
            (std::sqrt(std::max(lam[n - 2], 0.0)) * es.eigenvectors().col(n - 2))
                .cast<std::complex<double>>();
    auto [ok, xr] = rescale_feasible(std::move(x));
    if (ok) {
      ms.status = SolveStatus::Feasible;
      ms.x.x = std::move(xr);
      return ms;
    }
  }

  // Gaussian randomization around the lifting.
  Eigen::MatrixXd f = es.eigenvectors() * lam.cwiseMax(0.0).cwiseSqrt().asDiagonal();
  std::mt19937_64 rng = make_engine({cfg.seed, 0x72616e646f6dULL});
  double best_norm = std::numeric_limits<double>::infinity();
  Eigen::VectorXcd best;
  for (int s = 0; s < cfg.randomization_count; ++s) {
    Eigen::VectorXcd g(n);
    for (int i = 0; i < n; ++i) g[i] = standard_complex_normal(rng);
    Eigen::VectorXcd x = (f * g.real()).cast<std::complex<double>>() +
                         std::complex<double>(0, 1) *
                             (f * g.imag()).cast<std::complex<double>>();
    auto [ok, xr] = rescale_feasible(std::move(x));
    if (!ok) continue;
    double nn = xr.squaredNorm();
    if (nn < best_norm) {
      best_norm = nn;
      best = std::move(xr);
    }
  }

  // When a symmetric instance leaves the lifting spread over many directions,
  // search its dominant eigen-subspace directly: with x = V_r c the
  // constraint values are c^H M_p c for small symmetric M_p, and ascending
  // the smoothed worst ratio over the combining vector c recovers
  // deterministic candidates that sampling alone misses.  V_r is orthonormal,
  // so the unit sphere in c is exactly the unit-power sphere in x.
  if (!best.size() && n >= 2) {
    const int r = std::min(n, 12);
    Eigen::MatrixXd vr(n, r);
    for (int i = 0; i < r; ++i) vr.col(i) = es.eigenvectors().col(n - 1 - i);

    const int np = static_cast<int>(constraints.size());
    // Row block p holds M_p / rhs_p; one tall gemv evaluates every M_p c.
    Eigen::MatrixXd stack(static_cast<long>(np) * r, r);
    {
      Eigen::MatrixXd mp(r, r);
      Eigen::RowVectorXd rl(r);
      for (int p = 0; p < np; ++p) {
        mp.setZero();
        for (const auto& uf : constraints[p].factors) {
          rl.setZero();
          for (const auto& t : uf) rl += t.coeff * vr.row(t.index);
          mp += rl.transpose() * rl;
        }
        stack.middleRows(static_cast<long>(p) * r, r) =
            mp / std::max(constraints[p].rhs, 1e-300);
      }
    }

    Eigen::MatrixXd mc_re(static_cast<long>(np) * r, 1), mc_im(mc_re);
    Eigen::VectorXd q(np);
    auto eval = [&](const Eigen::VectorXcd& c) {
      mc_re = stack * c.real();
      mc_im = stack * c.imag();
      for (int p = 0; p < np; ++p) {
        double val = 0;
        for (int i = 0; i < r; ++i) {
          long row = static_cast<long>(p) * r + i;
          val += c[i].real() * mc_re(row, 0) + c[i].imag() * mc_im(row, 0);
        }
        q[p] = val;
      }
      return q.minCoeff();
    };

    const double needed = 1.0 / p_max;  // unit direction must clear this ratio
    auto ascend = [&](Eigen::VectorXcd c) {
      c.normalize();
      Eigen::VectorXcd c_top = c;
      double top = eval(c);
      const int iters = 250;
      for (int it = 0; it < iters && top < 2 * needed; ++it) {
        double m = eval(c);
        double beta = (5.0 + 95.0 * it / iters) / std::max(m, 1e-12);
        Eigen::VectorXcd g = Eigen::VectorXcd::Zero(r);
        for (int p = 0; p < np; ++p) {
          double wgt = std::exp(-beta * (q[p] - m));
          if (wgt <= 1e-12) continue;
          for (int i = 0; i < r; ++i) {
            long row = static_cast<long>(p) * r + i;
            g[i] += wgt * std::complex<double>(mc_re(row, 0), mc_im(row, 0));
          }
        }
        Eigen::VectorXcd d = g - c * c.dot(g);  // tangent component
        double nd = d.norm();
        if (nd <= 1e-14) break;
        c = (c + (0.1 / (1.0 + 3.0 * it / iters)) * (d / nd)).normalized();
        double ratio = eval(c);
        if (ratio > top) {
          top = ratio;
          c_top = c;
        }
      }
      return c_top;
    };

    std::vector<Eigen::VectorXcd> starts;
    Eigen::VectorXcd c0 = Eigen::VectorXcd::Zero(r);
    c0[0] = std::sqrt(std::max(lam[n - 1], 0.0));
    if (r >= 2) c0[1] = std::complex<double>(0, std::sqrt(std::max(lam[n - 2], 0.0)));
    starts.push_back(c0);
    for (int s = 0; s < 7; ++s) {
      Eigen::VectorXcd cr(r);
      for (int i = 0; i < r; ++i) cr[i] = standard_complex_normal(rng);
      starts.push_back(cr);
    }
    for (auto& c : starts) {
      Eigen::VectorXcd x = vr * ascend(std::move(c));
      auto [ok, xr] = rescale_feasible(std::move(x));
      if (!ok) continue;
      double nn = xr.squaredNorm();
      if (nn < best_norm) {
        best_norm = nn;
        best = std::move(xr);
      }
      if (best.size()) break;  // a full-budget-compliant candidate suffices
    }
  }

  if (!best.size()) {
    ms.status = SolveStatus::BudgetExhausted;
    ms.x.x = Eigen::VectorXcd::Zero(n);
    return ms;
  }
  ms.status = SolveStatus::Feasible;
  ms.x.x = std::move(best);
  return ms;
}

}  // namespace

ModulationSolve solve_modulation_core(int n, const std::vector<Separation>& seps,
                                      const CodeMatrix& code, double p_max,
                                      const SolverConfig& cfg) {
  auto constraints = masked_constraints(seps, code);
  TraceSdpResult sdp = solve_trace_min_sdp(n, constraints, p_max, sdp_options(p_max, cfg));
  return extract_modulation(sdp, constraints, p_max, cfg);
}

ModulationSolve solve_modulation_subproblem(const PairMatrixMap& pair_matrices,
                                            const ConstraintSet& constraints,
                                            double p_max, int slot_count,
                                            const SolverConfig& cfg) {
  (void)slot_count;  // the slot structure is already folded into the B matrices
  int n = 0;
  if (!pair_matrices.empty()) n = static_cast<int>(pair_matrices.begin()->second.rows());

  std::vector<SdpConstraint> cs;
  cs.reserve(constraints.pairs.size());
  for (std::size_t p = 0; p < constraints.pairs.size(); ++p) {
    const auto& pr = constraints.pairs[p];
    auto it = pair_matrices.find({pr.i, pr.j});
    if (it == pair_matrices.end())
      throw std::invalid_argument("pair matrix map is missing a constrained pair");
    const Eigen::MatrixXd& b = it->second;
    if (!n) n = static_cast<int>(b.rows());
    SdpConstraint c;
    c.rhs = pr.delta_f;
    c.pair_index = static_cast<int>(p);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b);
    double lmax = es.eigenvalues().cwiseAbs().maxCoeff();
    for (int t = 0; t < b.rows(); ++t) {
      double lam = es.eigenvalues()[t];
      if (lam <= 1e-12 * std::max(lmax, 1.0)) continue;
      std::vector<DiffTerm> u;
      double root = std::sqrt(lam);
      for (int i = 0; i < b.rows(); ++i) {
        double val = root * es.eigenvectors()(i, t);
        if (val != 0.0) u.push_back({i, val});
      }
      c.factors.push_back(std::move(u));
    }
    cs.push_back(std::move(c));
  }

  TraceSdpResult sdp = solve_trace_min_sdp(n, cs, p_max, sdp_options(p_max, cfg));
  return extract_modulation(sdp, cs, p_max, cfg);
}

FeasibilityReport check_feasibility(const Eigen::VectorXcd& x, const CodeMatrix& code,
                                    const InputEnumeration& enumeration,
                                    const ConstraintSet& constraints, double tol) {
  const int n = enumeration.vector_size();
  if (x.size() != n || code.rows() != n)
    throw std::invalid_argument("design dimensions do not match enumeration");
  const int l = code.slots();
  const int m = enumeration.num_rows();

  Eigen::MatrixXcd v(m, l);
  for (int i = 0; i < m; ++i) {
    auto sup = enumeration.support(i);
    for (int s = 0; s < l; ++s) {
      std::complex<double> acc = 0;
      for (int col : sup)
        if (code.bits(col, s)) acc += x[col];
      v(i, s) = acc;
    }
  }

  FeasibilityReport rep;
  rep.margins.reserve(constraints.pairs.size());
  rep.min_margin = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < constraints.pairs.size(); ++p) {
    const auto& pr = constraints.pairs[p];
    double dist = (v.row(pr.i) - v.row(pr.j)).squaredNorm();
    double margin = dist - pr.delta_f;
    rep.margins.push_back(margin);
    if (margin < rep.min_margin) {
      rep.min_margin = margin;
      rep.worst_pair = static_cast<int>(p);
    }
    if (margin < -tol * std::max(1.0, pr.delta_f)) rep.feasible = false;
  }
  if (constraints.pairs.empty()) rep.min_margin = 0;
  return rep;
}

namespace {

Eigen::VectorXcd expand_tied(const Eigen::VectorXcd& xs, int node_count) {
  Eigen::VectorXcd full(xs.size() * node_count);
  for (int k = 0; k < node_count; ++k) full.segment(k * xs.size(), xs.size()) = xs;
  return full;
}

CodeMatrix expand_tied(const CodeMatrix& cs, int node_count) {
  CodeMatrix full = CodeMatrix::zeros(cs.rows() * node_count, cs.slots());
  for (int k = 0; k < node_count; ++k)
    full.bits.block(k * cs.rows(), 0, cs.rows(), cs.slots()) = cs.bits;
  return full;
}

}  // namespace

DesignResult alternate_minimize(const InputEnumeration& enumeration,
                                const ConstraintSet& constraints,
                                const SolverConfig& cfg) {
  const int n_full = enumeration.vector_size();
  const int l = cfg.slot_count;
  if (l < 1) throw std::invalid_argument("slot count must be positive");
  const double p_max = cfg.p_max > 0 ? cfg.p_max : static_cast<double>(n_full);

  DesignResult dr;
  dr.x.p_max = p_max;

  if (constraints.pairs.empty()) {
    dr.x.x = Eigen::VectorXcd::Zero(n_full);
    dr.code = CodeMatrix::zeros(n_full, l);
    dr.surrogate_trace = {0.0};
    dr.feasibility = check_feasibility(dr.x.x, dr.code, enumeration, constraints);
    dr.status = SolveStatus::Feasible;
    dr.iterations_used = 1;
    return dr;
  }

  int bound = lmin_bound(constraints, n_full, p_max);
  if (l < bound) {
    std::ostringstream os;
    os << "slot count L=" << l << " is below the repetition lower bound L_min="
       << bound << " (max pair requirement * N / P_max with N=" << n_full
       << ", P_max=" << p_max << "); increase L or the power budget";
    throw std::invalid_argument(os.str());
  }

  const bool tied = enumeration.mode == EnumerationMode::Multiset;
  const int k = enumeration.node_count;
  const int n_space = tied ? enumeration.level_count : n_full;
  const double cap = tied ? p_max / k : p_max;
  const double scale = tied ? static_cast<double>(k) : 1.0;
  dr.tied_symbol_space = tied;

  std::vector<Separation> seps = dominant_separations(
      tied ? reduced_separations(enumeration, constraints)
           : build_separations(enumeration, constraints));

  CodeMatrix code = cfg.init_strategy == SolverConfig::Init::AllOnes
                        ? CodeMatrix::all_ones(n_space, l)
                        : CodeMatrix::bit_split(tied ? 1 : k, enumeration.level_count, l);
  Eigen::VectorXcd x = Eigen::VectorXcd::Zero(n_space);
  SolveStatus status = SolveStatus::Feasible;

  int iters = 0;
  for (int it = 1; it <= cfg.max_outer_iters; ++it) {
    ModulationSolve ms = solve_modulation_core(n_space, seps, code, cap, cfg);
    if (ms.status != SolveStatus::Feasible) {
      status = ms.status;
      iters = it;
      break;
    }

    if (cfg.code_search == SolverConfig::CodeSearch::Frozen) {
      // Pure repetition-style operation: the initial code is kept and only
      // the constellation is optimized, the way a tiled base pattern is
      // reused verbatim at larger slot counts.
      x = ms.x.x;
      iters = it;
      dr.surrogate_trace.push_back(scale * (l * x.squaredNorm() + code.ones_count()));
      break;
    }

    CodeSolve csv = solve_code_subproblem(ms.x.x, seps, n_space, l, cfg, &code);
    if (csv.status == SolveStatus::Infeasible) {
      // cannot happen when the modulation step succeeded with the previous
      // code as mask, but keep the search honest
      status = SolveStatus::Infeasible;
      iters = it;
      break;
    }

    double dx = (ms.x.x - x).squaredNorm();
    double dc = (csv.code.bits - code.bits).cwiseAbs().sum();
    x = ms.x.x;
    code = csv.code;
    iters = it;
    dr.surrogate_trace.push_back(scale * (l * x.squaredNorm() + code.ones_count()));
    if (scale * (l * dx + dc) <= cfg.convergence_tol) break;
  }

  dr.iterations_used = iters;
  dr.x.x = tied ? expand_tied(x, k) : x;
  dr.code = tied ? expand_tied(code, k) : code;
  dr.feasibility = check_feasibility(dr.x.x, dr.code, enumeration, constraints);
  if (status == SolveStatus::Feasible && !dr.feasibility.feasible)
    status = SolveStatus::Infeasible;
  dr.status = status;
  return dr;
}

}  // namespace rechcomp
