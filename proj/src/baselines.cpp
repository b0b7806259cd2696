#include "rechcomp/baselines.hpp"

#include <cmath>
#include <stdexcept>

namespace rechcomp {

namespace {

Eigen::VectorXcd tile_nodes(const Eigen::VectorXcd& xs, int node_count) {
  Eigen::VectorXcd full(xs.size() * node_count);
  for (int k = 0; k < node_count; ++k) full.segment(k * xs.size(), xs.size()) = xs;
  return full;
}

}  // namespace

RepeatBaseline channelcomp_repeat_design(const InputEnumeration& enumeration,
                                         const ConstraintSet& constraints,
                                         const SolverConfig& cfg) {
  const int n_full = enumeration.vector_size();
  const double p_max = cfg.p_max > 0 ? cfg.p_max : static_cast<double>(n_full);
  const bool tied = enumeration.mode == EnumerationMode::Multiset;
  const int k = enumeration.node_count;
  const int n_space = tied ? enumeration.level_count : n_full;
  const double cap = tied ? p_max / k : p_max;

  std::vector<Separation> seps = dominant_separations(
      tied ? reduced_separations(enumeration, constraints)
           : build_separations(enumeration, constraints));
  const CodeMatrix ones = CodeMatrix::all_ones(n_space, 1);

  RepeatBaseline out;
  out.x.p_max = p_max;

  double theta = 1.0;
  ModulationSolve ms = solve_modulation_core(n_space, seps, ones, cap, cfg);
  if (ms.status == SolveStatus::Feasible) {
    out.status = SolveStatus::Feasible;
  } else {
    // The single-slot design cannot meet the separation targets within the
    // power share.  The baseline then deploys the unconstrained design the
    // cited framework would pick, scaled down into the shared budget; the
    // pairs that scaling breaks are merged below.
    out.status = ms.status;
    SolverConfig relaxed = cfg;
    relaxed.p_max = 0;  // re-derived caps below stay effectively inactive
    double open_cap = cap * 1e6;
    ModulationSolve wide = solve_modulation_core(n_space, seps, ones, open_cap, relaxed);
    if (wide.status == SolveStatus::Feasible && wide.x.x.size()) {
      double power = wide.x.x.squaredNorm();
      double beta2 = power > 0 ? std::min(1.0, cap / power) : 1.0;
      theta = beta2;
      ms = std::move(wide);
      ms.x.x *= std::sqrt(beta2);
    } else {
      theta = 0.0;
      ms.x.x = Eigen::VectorXcd::Zero(n_space);
    }
  }
  out.theta = theta;
  out.x.x = tied ? tile_nodes(ms.x.x, k) : ms.x.x;

  const CodeMatrix ones_full = CodeMatrix::all_ones(n_full, 1);
  Codebook cb = build_codebook(enumeration, out.x.x, ones_full);
  // Merging is always judged against the original separation targets: a
  // scaled-down design keeps its best decodable shape, and every pair it
  // cannot truly separate collapses into one averaged cell.  This is the
  // degradation the repetition baseline is meant to exhibit.
  double max_df = 0;
  for (const auto& p : constraints.pairs) max_df = std::max(max_df, p.delta_f);
  out.codebook = merge_unresolved(std::move(cb), constraints,
                                  1e-6 * std::max(1.0, max_df));
  return out;
}

DecodeResult repeat_average_decode(const Eigen::VectorXcd& y,
                                   const Codebook& codebook) {
  if (codebook.slots != 1)
    throw std::invalid_argument("repetition decoding needs a single-slot codebook");
  if (y.size() < 1) throw std::invalid_argument("empty received sequence");
  Eigen::VectorXcd ybar(1);
  ybar[0] = y.mean();
  return decode(ybar, codebook);
}

namespace {

double transmit_map(double value, BuiltinFunction kind, double log_offset) {
  if (!std::isfinite(value)) throw std::invalid_argument("non-finite input value");
  switch (kind) {
    case BuiltinFunction::Sum:
      return value;
    case BuiltinFunction::Product: {
      double shifted = value + log_offset;
      if (shifted <= 0)
        throw std::domain_error(
            "log map needs value + log_offset > 0; raise log_offset");
      return std::log(shifted);
    }
    case BuiltinFunction::Max:
      break;
  }
  throw std::invalid_argument("analog aggregation supports only sum and product");
}

}  // namespace

AirCompDesign aircomp_design(const QuantizedFunction& f, BuiltinFunction kind,
                             double p_max, double log_offset) {
  if (p_max <= 0) throw std::invalid_argument("power cap must be positive");
  if (f.node_count <= 0 || f.level_count <= 0)
    throw std::invalid_argument("empty function domain");

  AirCompDesign d;
  d.kind = kind;
  d.log_offset = kind == BuiltinFunction::Product ? log_offset : 0.0;
  d.node_count = f.node_count;

  const int q = f.level_count;
  d.x.resize(f.node_count * q);
  double mean_sq = 0;
  for (int node = 0; node < f.node_count; ++node)
    for (int lev = 0; lev < q; ++lev) {
      double t = transmit_map(f.value_of(node, lev), kind, d.log_offset);
      d.x[node * q + lev] = t;
      mean_sq += t * t;
    }
  mean_sq /= static_cast<double>(f.node_count) * q;

  d.power_scale =
      mean_sq > 0 ? std::sqrt(p_max / (f.node_count * mean_sq)) : 1.0;
  d.x *= d.power_scale;
  return d;
}

double aircomp_encode(const AirCompDesign& design, double value) {
  return design.power_scale * transmit_map(value, design.kind, design.log_offset);
}

double aircomp_decode(const AirCompDesign& design, std::complex<double> y_mean) {
  double s = y_mean.real() / design.power_scale;
  switch (design.kind) {
    case BuiltinFunction::Sum:
      return s;
    case BuiltinFunction::Product:
      return std::exp(s);
    case BuiltinFunction::Max:
      break;
  }
  throw std::invalid_argument("analog aggregation supports only sum and product");
}

}  // namespace rechcomp
