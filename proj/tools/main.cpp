#include <complex>
#include <cstdio>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "rechcomp/artifact.hpp"
#include "rechcomp/baselines.hpp"
#include "rechcomp/decoder.hpp"
#include "rechcomp/harness.hpp"
#include "rechcomp/macsim.hpp"
#include "rechcomp/rng.hpp"
#include "rechcomp/table1.hpp"

namespace {

using namespace rechcomp;

// Raw (key, value) pairs in command-line order; applied over the config file
// so flags win.
using Overrides = std::vector<std::pair<std::string, std::string>>;

void add_config_flags(CLI::App* cmd, std::string* config_path, Overrides* over) {
  cmd->add_option("--config", *config_path, "key = value configuration file");
  auto push = [over](std::string key) {
    return [over, key = std::move(key)](const std::string& v) {
      over->emplace_back(key, v);
    };
  };
  cmd->add_option_function<std::string>("--function", push("function"),
                                        "sum, prod or max");
  cmd->add_option_function<std::string>("--values", push("values"),
                                        "comma list of domain values");
  cmd->add_option_function<std::string>("--k", push("k"), "number of nodes");
  cmd->add_option_function<std::string>("--q", push("q"),
                                        "levels 0..q-1 (shorthand for --values)");
  cmd->add_option_function<std::string>("--l", push("l"),
                                        "comma list of slot counts");
  cmd->add_option_function<std::string>("--snr", push("snr"),
                                        "start:step:stop dB or comma list");
  cmd->add_option_function<std::string>("--trials", push("trials"),
                                        "Monte Carlo trials per point");
  cmd->add_option_function<std::string>("--seed", push("seed"), "RNG seed");
  cmd->add_option_function<std::string>("--method", push("methods"),
                                        "comma list: rechcomp, channelcomp, aircomp");
  cmd->add_option_function<std::string>("--epsilon", push("epsilon"),
                                        "separation constant");
  cmd->add_option_function<std::string>("--pmax", push("pmax"), "power cap");
  cmd->add_option_function<std::string>("--mode", push("mode"),
                                        "full or multiset enumeration");
  cmd->add_option_function<std::string>("--tile-base", push("tile_base"),
                                        "design at this L and tile to multiples");
  cmd->add_option_function<std::string>("--init", push("init"),
                                        "initial code: bitsplit or allones");
  cmd->add_option_function<std::string>("--code-search", push("code_search"),
                                        "code subproblem: auto or frozen");
  cmd->add_option_function<std::string>("--channel", push("channel"),
                                        "ideal or rayleigh");
  cmd->add_option_function<std::string>("--fade-floor", push("fade_floor"),
                                        "deep fade reporting threshold");
  cmd->add_option_function<std::string>("--log-offset", push("log_offset"),
                                        "aircomp product offset");
  cmd->add_option_function<std::string>("--out", push("out"), "output path");
}

ExperimentConfig build_config(const std::string& config_path,
                              const Overrides& over) {
  ExperimentConfig c;
  if (!config_path.empty()) c = load_config_file(config_path, std::move(c));
  for (const auto& [key, value] : over) apply_config_value(c, key, value);
  if (c.values.empty())
    throw std::invalid_argument("no domain given; pass --values or --q");
  return c;
}

struct BuiltProblem {
  QuantizedFunction f;
  InputEnumeration en;
  ConstraintSet cs;
  SolverConfig scfg;
};

BuiltProblem build_problem(const ExperimentConfig& c) {
  BuiltProblem p;
  p.f = QuantizedFunction::builtin(c.function, c.node_count, c.values);
  p.en = enumerate_inputs(p.f, c.mode);
  p.cs = constraint_pairs(p.en, c.epsilon);
  p.scfg.epsilon = c.epsilon;
  p.scfg.p_max = c.p_max > 0 ? c.p_max : static_cast<double>(p.en.vector_size());
  p.scfg.slot_count = c.slot_counts.front();
  p.scfg.seed = c.seed;
  p.scfg.init_strategy = c.init;
  p.scfg.code_search = c.code_search;
  return p;
}

std::string fmt_complex(std::complex<double> z) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g%+gi", z.real(), z.imag());
  return buf;
}

int run_design(const ExperimentConfig& c) {
  BuiltProblem p = build_problem(c);
  DesignResult dr = alternate_minimize(p.en, p.cs, p.scfg);
  DesignArtifact a = make_artifact(dr, c.node_count,
                                   static_cast<int>(c.values.size()), c.epsilon);
  if (c.out_path.empty())
    std::cout << to_text(a);
  else
    write_artifact(a, c.out_path);
  std::cerr << "status " << a.status << ", iterations " << dr.iterations_used
            << ", min margin " << dr.feasibility.min_margin << "\n";
  return dr.status == SolveStatus::Feasible ? 0 : 1;
}

int run_simulate(const ExperimentConfig& c, const std::string& tuple_text,
                 double sigma) {
  BuiltProblem p = build_problem(c);
  std::vector<double> tuple = parse_double_list(tuple_text);
  if (static_cast<int>(tuple.size()) != c.node_count)
    throw std::invalid_argument("tuple length must equal k");
  std::vector<int> levels(tuple.size());
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    int lev = -1;
    for (std::size_t q = 0; q < c.values.size(); ++q)
      if (c.values[q] == tuple[i]) lev = static_cast<int>(q);
    if (lev < 0)
      throw std::invalid_argument("tuple entry not in the value domain");
    levels[i] = lev;
  }

  DesignResult dr = alternate_minimize(p.en, p.cs, p.scfg);
  std::cerr << "design status " << status_name(dr.status) << "\n";

  if (sigma < 0) sigma = sigma_from_snr(dr.x.x, c.snr_db.front());
  ChannelModel channel{c.channel, c.fade_floor, c.seed};
  NoiseModel noise{sigma, c.seed};
  SimOutput sim = simulate(dr.x.x, dr.code, levels, p.en.level_count, channel,
                           noise);

  Codebook cb = build_codebook(p.en, dr.x.x, dr.code);
  DecodeResult est = decode(sim.y, cb);
  double truth = p.f.evaluate_levels(levels);

  std::cout << "sigma = " << sigma << "\n";
  for (Eigen::Index l = 0; l < sim.y.size(); ++l)
    std::cout << "y[" << l << "] = " << fmt_complex(sim.y[l]) << "\n";
  std::cout << "estimate = " << est.value << "\n";
  std::cout << "truth = " << truth << "\n";
  return 0;
}

int run_sweep_cmd(const ExperimentConfig& c) {
  NmseReport report = run_sweep(c);
  if (c.out_path.empty())
    std::cout << to_csv(report);
  else
    write_csv(report, c.out_path);
  return 0;
}

int run_table1() {
  const auto& rows = table1_rows();
  Eigen::VectorXcd x = table1_modulation();
  CodeMatrix coded = table1_code();
  CodeMatrix uncoded = CodeMatrix::all_ones(16, 2);
  ChannelModel channel;
  NoiseModel silent;

  std::printf("%-12s %8s %18s %24s %s\n", "inputs", "product", "uncoded y",
              "coded y", "check");
  bool all_ok = true;
  for (const auto& row : rows) {
    std::vector<int> levels = table1_levels(row);
    Eigen::VectorXcd yu = simulate(x, uncoded, levels, 4, channel, silent).y;
    Eigen::VectorXcd yc = simulate(x, coded, levels, 4, channel, silent).y;
    bool ok = yu[0] == row.uncoded && yu[1] == row.uncoded &&
              yc[0] == row.coded[0] && yc[1] == row.coded[1];
    all_ok = all_ok && ok;
    char inputs[16];
    std::snprintf(inputs, sizeof inputs, "%d %d %d %d", row.values[0],
                  row.values[1], row.values[2], row.values[3]);
    std::printf("%-12s %8g %8s %8s %11s %11s  %s\n", inputs, row.product,
                fmt_complex(yu[0]).c_str(), fmt_complex(yu[1]).c_str(),
                fmt_complex(yc[0]).c_str(), fmt_complex(yc[1]).c_str(),
                ok ? "ok" : "MISMATCH");
  }
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"modulation and slot-code co-design for computing over a MAC"};
  app.require_subcommand(1);

  std::string config_path;
  Overrides over;
  std::string tuple_text;
  double sigma = -1;

  CLI::App* design = app.add_subcommand("design", "solve one design and emit the artifact");
  add_config_flags(design, &config_path, &over);

  CLI::App* simulate = app.add_subcommand("simulate", "one tuple through the designed channel");
  add_config_flags(simulate, &config_path, &over);
  simulate->add_option("--tuple", tuple_text, "comma list of node values")->required();
  simulate->add_option("--sigma", sigma, "noise sigma_z (overrides --snr)");

  CLI::App* sweep = app.add_subcommand("sweep", "Monte Carlo NMSE sweep, CSV output");
  add_config_flags(sweep, &config_path, &over);

  CLI::App* table1 = app.add_subcommand("table1", "reproduce the worked product example");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (design->parsed()) return run_design(build_config(config_path, over));
    if (simulate->parsed())
      return run_simulate(build_config(config_path, over), tuple_text, sigma);
    if (sweep->parsed()) return run_sweep_cmd(build_config(config_path, over));
    if (table1->parsed()) return run_table1();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
