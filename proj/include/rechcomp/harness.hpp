#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rechcomp/baselines.hpp"
#include "rechcomp/codesign.hpp"
#include "rechcomp/decoder.hpp"
#include "rechcomp/macsim.hpp"

namespace rechcomp {

// One Monte Carlo experiment: a function family, an L grid, an SNR grid and a
// method list.  Every (method, L, snr) cell runs `trials` independent trials.
struct ExperimentConfig {
  BuiltinFunction function = BuiltinFunction::Sum;
  std::vector<double> values;          // shared per-node domain, Q = size
  int node_count = 4;                  // K
  std::vector<int> slot_counts = {2};  // L grid
  std::vector<double> snr_db = {10};
  int trials = 100;                    // Ns per cell
  std::vector<std::string> methods = {"rechcomp"};
  double epsilon = 1e-2;
  double p_max = 0;                    // <= 0 selects N = K*Q
  std::uint64_t seed = 1;
  EnumerationMode mode = EnumerationMode::Multiset;
  int tile_base_slots = 0;  // > 0: design once there, tile to multiples
  SolverConfig::Init init = SolverConfig::Init::BitSplit;
  SolverConfig::CodeSearch code_search = SolverConfig::CodeSearch::Auto;
  ChannelModel::Mode channel = ChannelModel::Mode::Ideal;
  double fade_floor = 1e-3;
  double log_offset = 1e-2;  // aircomp product offset
  std::string out_path;      // empty writes to stdout
};

// Horizontal repetition of a base code: reps copies of the slot columns.
CodeMatrix tile_code(const CodeMatrix& base, int reps);

struct NmseResult {
  double value = 0;
  long used = 0;
  long excluded = 0;  // samples whose truth is exactly 0
};

// sum_j |f_j - fhat_j|^2 / |f_j| over kept samples, divided by the kept
// count.  Throws when every sample is excluded.
NmseResult nmse(const std::vector<double>& estimates,
                const std::vector<double>& truths);

struct SweepRow {
  std::string method;
  int slot_count = 0;
  double snr_db = 0;
  double nmse = 0;  // NaN when no trial survived exclusion
  long trials_used = 0;
  long excluded = 0;
  std::string status;
  std::uint64_t seed = 0;
};

struct NmseReport {
  std::vector<SweepRow> rows;
};

// Deterministic given the config: every trial draws from a stream derived
// from (seed, method, L, snr index, trial index).  Rows appear in config
// order (method, then L, then SNR).  Designs are produced once per
// (method, base L) and reused across the grid; infeasible or unsupported
// cells are still emitted, flagged by the status column.
NmseReport run_sweep(const ExperimentConfig& config);

// Exact header: method,L,snr_db,nmse,trials_used,excluded,status,seed
std::string to_csv(const NmseReport& report);
void write_csv(const NmseReport& report, const std::string& path);

// Plain `key = value` text; '#' comments and [section] markers are skipped.
// Later lines win.  Keys: function, values, k, q, l, snr, trials, methods,
// epsilon, pmax, seed, mode, tile_base, channel, fade_floor, log_offset, out.
ExperimentConfig parse_config_text(const std::string& text,
                                   ExperimentConfig base = {});
ExperimentConfig load_config_file(const std::string& path,
                                  ExperimentConfig base = {});
void apply_config_value(ExperimentConfig& config, const std::string& key,
                        const std::string& value);

// "start:step:stop" (inclusive) or a comma list.
std::vector<double> parse_grid(const std::string& text);
std::vector<int> parse_int_list(const std::string& text);
std::vector<double> parse_double_list(const std::string& text);

}  // namespace rechcomp
