#include "rechcomp/artifact.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rechcomp {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

DesignArtifact make_artifact(const DesignResult& design, int node_count,
                             int level_count, double epsilon) {
  DesignArtifact a;
  a.node_count = node_count;
  a.level_count = level_count;
  a.slot_count = design.code.slots();
  a.epsilon = epsilon;
  a.p_max = design.x.p_max;
  a.status = status_name(design.status);
  a.x = design.x.x;
  a.code_rows = design.code.row_strings();
  a.margins = design.feasibility.margins;
  return a;
}

std::string to_text(const DesignArtifact& a) {
  std::ostringstream os;
  os << "k = " << a.node_count << "\n";
  os << "q = " << a.level_count << "\n";
  os << "l = " << a.slot_count << "\n";
  os << "epsilon = " << fmt(a.epsilon) << "\n";
  os << "pmax = " << fmt(a.p_max) << "\n";
  os << "status = " << a.status << "\n";
  for (Eigen::Index i = 0; i < a.x.size(); ++i)
    os << "x = " << fmt(a.x[i].real()) << " " << fmt(a.x[i].imag()) << "\n";
  for (const auto& row : a.code_rows) os << "c = " << row << "\n";
  for (double m : a.margins) os << "margin = " << fmt(m) << "\n";
  return os.str();
}

DesignArtifact artifact_from_text(const std::string& text) {
  DesignArtifact a;
  std::vector<std::complex<double>> xs;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto eq = t.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("artifact line " + std::to_string(lineno) +
                                  ": expected key = value");
    std::string key = trim(t.substr(0, eq));
    std::string val = trim(t.substr(eq + 1));
    if (key == "k") {
      a.node_count = std::stoi(val);
    } else if (key == "q") {
      a.level_count = std::stoi(val);
    } else if (key == "l") {
      a.slot_count = std::stoi(val);
    } else if (key == "epsilon") {
      a.epsilon = std::stod(val);
    } else if (key == "pmax") {
      a.p_max = std::stod(val);
    } else if (key == "status") {
      a.status = val;
    } else if (key == "x") {
      std::istringstream vs(val);
      double re = 0, im = 0;
      if (!(vs >> re >> im))
        throw std::invalid_argument("artifact line " + std::to_string(lineno) +
                                    ": expected two reals");
      xs.emplace_back(re, im);
    } else if (key == "c") {
      for (char ch : val)
        if (ch != '0' && ch != '1')
          throw std::invalid_argument("artifact line " + std::to_string(lineno) +
                                      ": code rows are 0/1 strings");
      a.code_rows.push_back(val);
    } else if (key == "margin") {
      a.margins.push_back(std::stod(val));
    } else {
      throw std::invalid_argument("artifact line " + std::to_string(lineno) +
                                  ": unknown key '" + key + "'");
    }
  }
  a.x = Eigen::Map<const Eigen::VectorXcd>(xs.data(), static_cast<Eigen::Index>(xs.size()));
  return a;
}

void write_artifact(const DesignArtifact& artifact, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  os << to_text(artifact);
  if (!os) throw std::runtime_error("failed writing " + path);
}

DesignArtifact read_artifact(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << is.rdbuf();
  return artifact_from_text(buf.str());
}

}  // namespace rechcomp
