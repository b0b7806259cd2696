#pragma once

#include <Eigen/Dense>
#include <complex>

#include "rechcomp/codesign.hpp"
#include "rechcomp/decoder.hpp"

namespace rechcomp {

// Single-slot constellation design transmitted identically over L slots with
// receive-side averaging.  When the requested separations are infeasible
// under the power cap at L = 1, the design falls back to the largest feasible
// uniform scaling theta of the requirements and merges whatever the scaled
// design still cannot resolve.
struct RepeatBaseline {
  ModulationVector x;    // full entry space
  Codebook codebook;     // single-slot codebook, merged where unresolved
  SolveStatus status = SolveStatus::Infeasible;  // vs. the requested targets
  double theta = 0;      // achieved fraction of the separation requirements
};

RepeatBaseline channelcomp_repeat_design(const InputEnumeration& enumeration,
                                         const ConstraintSet& constraints,
                                         const SolverConfig& cfg);

// Averages the repeated slots back to one and applies the single-slot rule;
// effective noise variance drops as 1/L.
DecodeResult repeat_average_decode(const Eigen::VectorXcd& y,
                                   const Codebook& codebook);

// Uncoded analog aggregation: sums transmit the value itself, products
// transmit log(value + log_offset); the receiver averages the slots, rescales
// and (for products) exponentiates.  Amplitudes are real, on the in-phase
// component.  power_scale puts the expected per-node energy per slot at
// p_max / K, so the expected total over L slots matches the coded budget
// L * p_max.
struct AirCompDesign {
  BuiltinFunction kind = BuiltinFunction::Sum;
  double power_scale = 1;  // amplitude multiplier g
  double log_offset = 0;   // delta_0, needed when a product domain contains 0
  int node_count = 0;
  Eigen::VectorXcd x;      // equivalent per-entry modulation g * t(value)
};

// Max has no analog aggregation rule here and is rejected.
AirCompDesign aircomp_design(const QuantizedFunction& f, BuiltinFunction kind,
                             double p_max, double log_offset = 1e-2);

// Transmit amplitude for one input value.
double aircomp_encode(const AirCompDesign& design, double value);

// Estimate from the slot-averaged received sample.  Noiseless sums are exact;
// noiseless products return prod_k (v_k + log_offset).
double aircomp_decode(const AirCompDesign& design, std::complex<double> y_mean);

}  // namespace rechcomp
