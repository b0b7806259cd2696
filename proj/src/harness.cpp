#include "rechcomp/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "rechcomp/rng.hpp"

namespace rechcomp {

CodeMatrix tile_code(const CodeMatrix& base, int reps) {
  if (reps < 1) throw std::invalid_argument("repetition count must be positive");
  CodeMatrix tiled = CodeMatrix::zeros(base.rows(), base.slots() * reps);
  for (int r = 0; r < reps; ++r)
    tiled.bits.block(0, r * base.slots(), base.rows(), base.slots()) = base.bits;
  return tiled;
}

NmseResult nmse(const std::vector<double>& estimates,
                const std::vector<double>& truths) {
  if (estimates.size() != truths.size())
    throw std::invalid_argument("estimate/truth length mismatch");
  NmseResult r;
  double acc = 0;
  for (std::size_t i = 0; i < truths.size(); ++i) {
    if (truths[i] == 0.0) {
      ++r.excluded;
      continue;
    }
    double d = truths[i] - estimates[i];
    acc += d * d / std::abs(truths[i]);
    ++r.used;
  }
  if (!r.used) throw std::domain_error("every sample was excluded (truth 0)");
  r.value = acc / static_cast<double>(r.used);
  return r;
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int method_id(const std::string& name) {
  if (name == "rechcomp") return 1;
  if (name == "channelcomp") return 2;
  if (name == "aircomp") return 3;
  throw std::invalid_argument("unknown method '" + name + "'");
}

// Everything one (method, L) cell needs to run trials.
struct PreparedMethod {
  int kind = 0;  // method_id value
  std::string status;
  bool usable = false;
  Eigen::VectorXcd x;  // transmitted entries; also sets the SNR scale
  CodeMatrix code;     // full L columns
  Codebook codebook;   // rechcomp: L slots; channelcomp: single slot
  AirCompDesign air;
};

double merge_tolerance(const ConstraintSet& constraints) {
  double max_df = 0;
  for (const auto& p : constraints.pairs) max_df = std::max(max_df, p.delta_f);
  return 1e-6 * std::max(1.0, max_df);
}

}  // namespace

NmseReport run_sweep(const ExperimentConfig& config) {
  if (config.trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (config.values.empty()) throw std::invalid_argument("empty value domain");
  if (config.slot_counts.empty() || config.snr_db.empty() || config.methods.empty())
    throw std::invalid_argument("empty sweep grid");
  for (const auto& m : config.methods) method_id(m);  // validate early

  QuantizedFunction f = QuantizedFunction::builtin(config.function,
                                                   config.node_count, config.values);
  InputEnumeration en = enumerate_inputs(f, config.mode);
  ConstraintSet cs = constraint_pairs(en, config.epsilon);
  const int n = en.vector_size();
  const double p_max = config.p_max > 0 ? config.p_max : static_cast<double>(n);
  const double merge_tol = merge_tolerance(cs);
  const int bound = lmin_bound(cs, n, p_max);

  SolverConfig scfg;
  scfg.epsilon = config.epsilon;
  scfg.p_max = p_max;
  scfg.seed = config.seed;
  scfg.init_strategy = config.init;
  scfg.code_search = config.code_search;

  // Designs shared across the grid.
  std::map<int, DesignResult> rech_by_base;  // keyed by the base slot count
  RepeatBaseline channelcomp;
  bool have_channelcomp = false;
  AirCompDesign aircomp;
  std::string aircomp_status = "feasible";
  bool have_aircomp = false;

  auto prepare = [&](const std::string& method, int l) {
    PreparedMethod pm;
    pm.kind = method_id(method);
    if (pm.kind == 1) {
      int base = l;
      if (config.tile_base_slots > 0 && l % config.tile_base_slots == 0 &&
          config.tile_base_slots >= bound)
        base = config.tile_base_slots;
      if (base < bound) {
        pm.status = "below_lmin";
        return pm;
      }
      auto it = rech_by_base.find(base);
      if (it == rech_by_base.end()) {
        SolverConfig dc = scfg;
        dc.slot_count = base;
        it = rech_by_base.emplace(base, alternate_minimize(en, cs, dc)).first;
      }
      const DesignResult& dr = it->second;
      pm.status = status_name(dr.status);
      pm.x = dr.x.x;
      pm.code = l == base ? dr.code : tile_code(dr.code, l / base);
      pm.codebook =
          merge_unresolved(build_codebook(en, pm.x, pm.code), cs, merge_tol);
      pm.usable = true;
    } else if (pm.kind == 2) {
      if (!have_channelcomp) {
        channelcomp = channelcomp_repeat_design(en, cs, scfg);
        have_channelcomp = true;
      }
      pm.status = status_name(channelcomp.status);
      pm.x = channelcomp.x.x;
      pm.code = CodeMatrix::all_ones(n, l);
      pm.usable = true;
    } else {
      if (!have_aircomp) {
        try {
          aircomp = aircomp_design(f, config.function, p_max, config.log_offset);
          have_aircomp = true;
        } catch (const std::invalid_argument&) {
          aircomp_status = "unsupported";
        }
      }
      if (!have_aircomp) {
        pm.status = aircomp_status;
        return pm;
      }
      pm.status = aircomp_status;
      pm.air = aircomp;
      pm.x = aircomp.x;
      pm.code = CodeMatrix::all_ones(n, l);
      pm.usable = true;
    }
    // An all-zero design has no SNR scale and nothing to decode; keep the
    // status row but skip the trials.
    if (pm.usable && pm.x.norm() == 0.0) pm.usable = false;
    return pm;
  };

  NmseReport report;
  const int m_rows = en.num_rows();
  const ChannelModel channel{config.channel, config.fade_floor, 0};

  for (const auto& method : config.methods) {
    for (int l : config.slot_counts) {
      PreparedMethod pm = prepare(method, l);
      for (std::size_t si = 0; si < config.snr_db.size(); ++si) {
        SweepRow row;
        row.method = method;
        row.slot_count = l;
        row.snr_db = config.snr_db[si];
        row.status = pm.status;
        row.seed = config.seed;
        row.nmse = std::numeric_limits<double>::quiet_NaN();
        if (pm.usable) {
          NoiseModel noise{sigma_from_snr(pm.x, config.snr_db[si]), 0};
          double acc = 0;
          for (int t = 0; t < config.trials; ++t) {
            // Common random numbers: the stream depends only on (seed, trial),
            // so every method, slot count and SNR point sees the same tuples
            // and the same unit noise shapes.  NMSE curves then inherit the
            // per-trial monotonicity of the channel instead of sampling jitter.
            std::mt19937_64 rng =
                make_engine({config.seed, static_cast<std::uint64_t>(t)});
            int tuple = std::min(m_rows - 1,
                                 static_cast<int>(uniform01(rng) * m_rows));
            double truth = en.output_values[tuple];
            if (truth == 0.0) {
              ++row.excluded;
              continue;
            }
            SimOutput sim = simulate(pm.x, pm.code, en.rows[tuple],
                                     en.level_count, channel, noise, rng);
            double est = 0;
            if (pm.kind == 1)
              est = decode(sim.y, pm.codebook).value;
            else if (pm.kind == 2)
              est = repeat_average_decode(sim.y, channelcomp.codebook).value;
            else
              est = aircomp_decode(pm.air, sim.y.mean());
            double d = truth - est;
            acc += d * d / std::abs(truth);
            ++row.trials_used;
          }
          if (row.trials_used)
            row.nmse = acc / static_cast<double>(row.trials_used);
        }
        report.rows.push_back(std::move(row));
      }
    }
  }
  return report;
}

std::string to_csv(const NmseReport& report) {
  std::ostringstream os;
  os << "method,L,snr_db,nmse,trials_used,excluded,status,seed\n";
  for (const auto& r : report.rows)
    os << r.method << ',' << r.slot_count << ',' << fmt(r.snr_db) << ','
       << fmt(r.nmse) << ',' << r.trials_used << ',' << r.excluded << ','
       << r.status << ',' << r.seed << '\n';
  return os.str();
}

void write_csv(const NmseReport& report, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  os << to_csv(report);
  if (!os) throw std::runtime_error("failed writing " + path);
}

namespace {

std::vector<std::string> split(const std::string& s, char delim) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, delim)) out.push_back(item);
  return out;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& token) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(token, &used);
  } catch (const std::exception&) {
    used = std::string::npos;
  }
  if (used != token.size())
    throw std::invalid_argument("not a number: '" + token + "'");
  return v;
}

int to_int(const std::string& token) {
  double v = to_double(token);
  int i = static_cast<int>(std::lround(v));
  if (std::abs(v - i) > 1e-9)
    throw std::invalid_argument("expected an integer: '" + token + "'");
  return i;
}

}  // namespace

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& part : split(text, ',')) {
    std::string t = trim(part);
    if (t.empty()) continue;
    out.push_back(to_double(t));
  }
  if (out.empty()) throw std::invalid_argument("empty list: '" + text + "'");
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (double v : parse_double_list(text)) {
    int i = static_cast<int>(std::lround(v));
    if (std::abs(v - i) > 1e-9)
      throw std::invalid_argument("expected integers: '" + text + "'");
    out.push_back(i);
  }
  return out;
}

std::vector<double> parse_grid(const std::string& text) {
  if (text.find(':') == std::string::npos) return parse_double_list(text);
  auto parts = split(text, ':');
  if (parts.size() != 3)
    throw std::invalid_argument("grid must be start:step:stop, got '" + text + "'");
  double start = std::stod(trim(parts[0]));
  double step = std::stod(trim(parts[1]));
  double stop = std::stod(trim(parts[2]));
  if (step <= 0) throw std::invalid_argument("grid step must be positive");
  std::vector<double> out;
  for (double v = start; v <= stop + 1e-9 * std::max(1.0, std::abs(step));
       v += step)
    out.push_back(v);
  if (out.empty()) throw std::invalid_argument("empty grid: '" + text + "'");
  return out;
}

void apply_config_value(ExperimentConfig& config, const std::string& key,
                        const std::string& value) {
  if (key == "function") {
    config.function = builtin_from_name(value);
  } else if (key == "values") {
    config.values = parse_double_list(value);
  } else if (key == "q") {
    int q = std::stoi(value);
    if (q < 1) throw std::invalid_argument("q must be >= 1");
    config.values.resize(q);
    for (int i = 0; i < q; ++i) config.values[i] = i;
  } else if (key == "k") {
    config.node_count = std::stoi(value);
  } else if (key == "l") {
    config.slot_counts = parse_int_list(value);
  } else if (key == "snr") {
    config.snr_db = parse_grid(value);
  } else if (key == "trials") {
    config.trials = std::stoi(value);
  } else if (key == "methods" || key == "method") {
    config.methods.clear();
    for (const auto& m : split(value, ',')) {
      std::string t = trim(m);
      if (!t.empty()) config.methods.push_back(t);
    }
  } else if (key == "epsilon") {
    config.epsilon = std::stod(value);
  } else if (key == "pmax") {
    config.p_max = std::stod(value);
  } else if (key == "seed") {
    config.seed = std::stoull(value);
  } else if (key == "mode") {
    if (value == "full")
      config.mode = EnumerationMode::Full;
    else if (value == "multiset")
      config.mode = EnumerationMode::Multiset;
    else
      throw std::invalid_argument("mode must be full or multiset");
  } else if (key == "tile_base") {
    config.tile_base_slots = std::stoi(value);
  } else if (key == "init") {
    if (value == "bitsplit")
      config.init = SolverConfig::Init::BitSplit;
    else if (value == "allones")
      config.init = SolverConfig::Init::AllOnes;
    else
      throw std::invalid_argument("init must be bitsplit or allones");
  } else if (key == "code_search") {
    if (value == "auto")
      config.code_search = SolverConfig::CodeSearch::Auto;
    else if (value == "frozen")
      config.code_search = SolverConfig::CodeSearch::Frozen;
    else
      throw std::invalid_argument("code_search must be auto or frozen");
  } else if (key == "channel") {
    if (value == "ideal")
      config.channel = ChannelModel::Mode::Ideal;
    else if (value == "rayleigh")
      config.channel = ChannelModel::Mode::Rayleigh;
    else
      throw std::invalid_argument("channel must be ideal or rayleigh");
  } else if (key == "fade_floor") {
    config.fade_floor = std::stod(value);
  } else if (key == "log_offset") {
    config.log_offset = std::stod(value);
  } else if (key == "out") {
    config.out_path = value;
  } else {
    throw std::invalid_argument("unknown config key '" + key + "'");
  }
}

ExperimentConfig parse_config_text(const std::string& text, ExperimentConfig base) {
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == '[') continue;
    auto eq = t.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key = value");
    apply_config_value(base, trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
  return base;
}

ExperimentConfig load_config_file(const std::string& path, ExperimentConfig base) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << is.rdbuf();
  return parse_config_text(buf.str(), std::move(base));
}

}  // namespace rechcomp
