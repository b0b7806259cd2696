#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "rechcomp/baselines.hpp"
#include "rechcomp/codesign.hpp"
#include "rechcomp/decoder.hpp"
#include "rechcomp/functab.hpp"
#include "rechcomp/harness.hpp"
#include "rechcomp/macsim.hpp"
#include "rechcomp/table1.hpp"

namespace py = pybind11;
using namespace rechcomp;

namespace {

QuantizedFunction make_function(const std::string& name,
                                const std::vector<double>& values, int k) {
  return QuantizedFunction::builtin(builtin_from_name(name), k, values);
}

EnumerationMode mode_from_name(const std::string& mode) {
  if (mode == "full") return EnumerationMode::Full;
  if (mode == "multiset") return EnumerationMode::Multiset;
  throw std::invalid_argument("mode must be 'full' or 'multiset'");
}

CodeMatrix code_from_rows(const std::vector<std::string>& rows) {
  if (rows.empty()) throw std::invalid_argument("empty code");
  CodeMatrix code = CodeMatrix::zeros(static_cast<int>(rows.size()),
                                      static_cast<int>(rows[0].size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != rows[0].size())
      throw std::invalid_argument("ragged code rows");
    for (std::size_t l = 0; l < rows[r].size(); ++l) {
      char bit = rows[r][l];
      if (bit != '0' && bit != '1')
        throw std::invalid_argument("code rows must be 0/1 strings");
      code.bits(static_cast<int>(r), static_cast<int>(l)) = bit == '1';
    }
  }
  return code;
}

py::dict enumeration_dict(const InputEnumeration& en) {
  py::dict out;
  out["rows"] = en.rows;
  out["outputs"] = en.output_values;
  out["k"] = en.node_count;
  out["q"] = en.level_count;
  out["n"] = en.vector_size();
  return out;
}

py::dict design_impl(const std::string& function, std::vector<double> values,
                     int k, int l, double epsilon, double p_max,
                     std::uint64_t seed, const std::string& mode,
                     const std::string& init, const std::string& code_search) {
  QuantizedFunction f = make_function(function, values, k);
  InputEnumeration en = enumerate_inputs(f, mode_from_name(mode));
  ConstraintSet cs = constraint_pairs(en, epsilon);

  SolverConfig cfg;
  cfg.epsilon = epsilon;
  cfg.p_max = p_max;
  cfg.slot_count = l;
  cfg.seed = seed;
  if (init == "allones")
    cfg.init_strategy = SolverConfig::Init::AllOnes;
  else if (init != "bitsplit")
    throw std::invalid_argument("init must be 'bitsplit' or 'allones'");
  if (code_search == "frozen")
    cfg.code_search = SolverConfig::CodeSearch::Frozen;
  else if (code_search != "auto")
    throw std::invalid_argument("code_search must be 'auto' or 'frozen'");

  DesignResult dr = alternate_minimize(en, cs, cfg);

  std::vector<std::complex<double>> x(dr.x.x.data(), dr.x.x.data() + dr.x.x.size());
  py::dict out;
  out["x"] = x;
  out["code"] = dr.code.row_strings();
  out["status"] = std::string(status_name(dr.status));
  out["feasible"] = dr.feasibility.feasible;
  out["min_margin"] = dr.feasibility.min_margin;
  out["surrogate"] = dr.surrogate_trace;
  out["iterations"] = dr.iterations_used;
  out["p_max"] = dr.x.p_max;
  return out;
}

double decode_impl(const std::vector<std::complex<double>>& y,
                   const std::vector<std::complex<double>>& x,
                   const std::vector<std::string>& code_rows,
                   const std::string& function, std::vector<double> values,
                   int k, double epsilon, const std::string& mode) {
  QuantizedFunction f = make_function(function, values, k);
  InputEnumeration en = enumerate_inputs(f, mode_from_name(mode));
  ConstraintSet cs = constraint_pairs(en, epsilon);
  Eigen::VectorXcd xv(static_cast<int>(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i) xv[static_cast<int>(i)] = x[i];
  CodeMatrix code = code_from_rows(code_rows);

  double max_df = 0;
  for (const auto& p : cs.pairs) max_df = std::max(max_df, p.delta_f);
  Codebook cb = merge_unresolved(build_codebook(en, xv, code), cs,
                                 1e-6 * std::max(1.0, max_df));
  Eigen::VectorXcd yv(static_cast<int>(y.size()));
  for (std::size_t i = 0; i < y.size(); ++i) yv[static_cast<int>(i)] = y[i];
  return decode(yv, cb).value;
}

std::vector<std::complex<double>> simulate_impl(
    const std::vector<std::complex<double>>& x,
    const std::vector<std::string>& code_rows, const std::vector<int>& levels,
    int q, double sigma, std::uint64_t seed, const std::string& channel) {
  Eigen::VectorXcd xv(static_cast<int>(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i) xv[static_cast<int>(i)] = x[i];
  CodeMatrix code = code_from_rows(code_rows);

  ChannelModel ch;
  if (channel == "rayleigh")
    ch.mode = ChannelModel::Mode::Rayleigh;
  else if (channel != "ideal")
    throw std::invalid_argument("channel must be 'ideal' or 'rayleigh'");
  ch.seed = seed;
  NoiseModel noise{sigma, seed};

  SimOutput sim = simulate(xv, code, levels, q, ch, noise);
  return std::vector<std::complex<double>>(sim.y.data(), sim.y.data() + sim.y.size());
}

py::list sweep_rows_impl(const std::string& config_text) {
  ExperimentConfig cfg = parse_config_text(config_text);
  cfg.out_path.clear();
  NmseReport report = run_sweep(cfg);
  py::list rows;
  for (const auto& r : report.rows) {
    py::dict d;
    d["method"] = r.method;
    d["L"] = r.slot_count;
    d["snr_db"] = r.snr_db;
    d["nmse"] = r.nmse;
    d["trials_used"] = r.trials_used;
    d["excluded"] = r.excluded;
    d["status"] = r.status;
    d["seed"] = r.seed;
    rows.append(d);
  }
  return rows;
}

std::string sweep_csv_impl(const std::string& config_text) {
  ExperimentConfig cfg = parse_config_text(config_text);
  cfg.out_path.clear();
  return to_csv(run_sweep(cfg));
}

py::list table1_impl() {
  py::list rows;
  for (const auto& r : table1_rows()) {
    py::dict d;
    d["values"] = std::vector<int>(r.values.begin(), r.values.end());
    d["product"] = r.product;
    d["uncoded"] = r.uncoded;
    d["coded"] = std::vector<std::complex<double>>(r.coded.begin(), r.coded.end());
    rows.append(d);
  }
  return rows;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Joint constellation and slot-code design for computing over MACs";

  m.def("enumerate_table",
        [](const std::string& function, std::vector<double> values, int k,
           const std::string& mode) {
          QuantizedFunction f = make_function(function, values, k);
          return enumeration_dict(enumerate_inputs(f, mode_from_name(mode)));
        },
        py::arg("function"), py::arg("values"), py::arg("k"),
        py::arg("mode") = "multiset",
        "Canonical input enumeration with function outputs.");

  m.def("lmin_bound",
        [](const std::string& function, std::vector<double> values, int k,
           double epsilon, double p_max, const std::string& mode) {
          QuantizedFunction f = make_function(function, values, k);
          InputEnumeration en = enumerate_inputs(f, mode_from_name(mode));
          ConstraintSet cs = constraint_pairs(en, epsilon);
          double cap = p_max > 0 ? p_max : static_cast<double>(en.vector_size());
          return lmin_bound(cs, en.vector_size(), cap);
        },
        py::arg("function"), py::arg("values"), py::arg("k"), py::arg("epsilon"),
        py::arg("p_max") = 0.0, py::arg("mode") = "multiset",
        "Smallest admissible slot count for the requested separations.");

  m.def("design", &design_impl, py::arg("function"), py::arg("values"),
        py::arg("k"), py::arg("l"), py::arg("epsilon"), py::arg("p_max") = 0.0,
        py::arg("seed") = 0, py::arg("mode") = "multiset",
        py::arg("init") = "bitsplit", py::arg("code_search") = "auto",
        "Alternating modulation/code design; returns x, code rows and status.");

  m.def("simulate", &simulate_impl, py::arg("x"), py::arg("code"),
        py::arg("levels"), py::arg("q"), py::arg("sigma"), py::arg("seed") = 0,
        py::arg("channel") = "ideal",
        "Received slot samples for one level tuple.");

  m.def("decode", &decode_impl, py::arg("y"), py::arg("x"), py::arg("code"),
        py::arg("function"), py::arg("values"), py::arg("k"),
        py::arg("epsilon"), py::arg("mode") = "multiset",
        "Joint nearest-neighbor estimate of the function value.");

  m.def("nmse",
        [](const std::vector<double>& estimates, const std::vector<double>& truths) {
          NmseResult r = nmse(estimates, truths);
          return py::make_tuple(r.value, r.used, r.excluded);
        },
        py::arg("estimates"), py::arg("truths"),
        "Normalized MSE with zero-truth exclusion: (value, used, excluded).");

  m.def("sigma_from_snr",
        [](const std::vector<std::complex<double>>& x, double snr_db) {
          Eigen::VectorXcd xv(static_cast<int>(x.size()));
          for (std::size_t i = 0; i < x.size(); ++i)
            xv[static_cast<int>(i)] = x[i];
          return sigma_from_snr(xv, snr_db);
        },
        py::arg("x"), py::arg("snr_db"));

  m.def("snr_from_sigma",
        [](const std::vector<std::complex<double>>& x, double sigma) {
          Eigen::VectorXcd xv(static_cast<int>(x.size()));
          for (std::size_t i = 0; i < x.size(); ++i)
            xv[static_cast<int>(i)] = x[i];
          return snr_from_sigma(xv, sigma);
        },
        py::arg("x"), py::arg("sigma"));

  m.def("sweep_csv", &sweep_csv_impl, py::arg("config_text"),
        "Run a Monte Carlo sweep from config text and return the CSV.");

  m.def("sweep_rows", &sweep_rows_impl, py::arg("config_text"),
        "Run a Monte Carlo sweep and return the rows as dictionaries.");

  m.def("table1", &table1_impl,
        "The worked product example: values, product, uncoded and coded samples.");
}
