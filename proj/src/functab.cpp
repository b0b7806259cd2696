#include "rechcomp/functab.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace rechcomp {

BuiltinFunction builtin_from_name(const std::string& name) {
  if (name == "sum") return BuiltinFunction::Sum;
  if (name == "prod" || name == "product") return BuiltinFunction::Product;
  if (name == "max") return BuiltinFunction::Max;
  throw std::invalid_argument("unknown function kind: " + name);
}

std::string builtin_name(BuiltinFunction kind) {
  switch (kind) {
    case BuiltinFunction::Sum: return "sum";
    case BuiltinFunction::Product: return "prod";
    case BuiltinFunction::Max: return "max";
  }
  throw std::logic_error("unreachable");
}

double QuantizedFunction::evaluate_levels(const std::vector<int>& levels) const {
  if (static_cast<int>(levels.size()) != node_count)
    throw std::invalid_argument("level tuple has wrong arity");
  std::vector<double> vals(node_count);
  for (int k = 0; k < node_count; ++k) {
    int q = levels[k];
    if (q < 0 || q >= level_count) throw std::out_of_range("level index out of range");
    vals[k] = domain_values[k][q];
  }
  return evaluator(vals);
}

QuantizedFunction QuantizedFunction::builtin(BuiltinFunction kind, int node_count,
                                             std::vector<double> values) {
  if (node_count < 1) throw std::invalid_argument("node count must be positive");
  if (values.empty()) throw std::invalid_argument("value list must be non-empty");
  QuantizedFunction f;
  f.node_count = node_count;
  f.level_count = static_cast<int>(values.size());
  f.domain_values.assign(node_count, values);
  f.symmetric = true;
  switch (kind) {
    case BuiltinFunction::Sum:
      f.evaluator = [](const std::vector<double>& v) {
        double s = 0;
        for (double x : v) s += x;
        return s;
      };
      break;
    case BuiltinFunction::Product:
      f.evaluator = [](const std::vector<double>& v) {
        double p = 1;
        for (double x : v) p *= x;
        return p;
      };
      break;
    case BuiltinFunction::Max:
      f.evaluator = [](const std::vector<double>& v) {
        return *std::max_element(v.begin(), v.end());
      };
      break;
  }
  return f;
}

std::vector<int> InputEnumeration::support(int row) const {
  std::vector<int> idx(node_count);
  for (int k = 0; k < node_count; ++k) idx[k] = k * level_count + rows[row][k];
  return idx;
}

Eigen::MatrixXd InputEnumeration::selection_matrix() const {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(num_rows(), vector_size());
  for (int i = 0; i < num_rows(); ++i)
    for (int col : support(i)) a(i, col) = 1.0;
  return a;
}

namespace {

std::size_t multiset_count(int q, int k) {
  // C(q + k - 1, k), guarded against overflow at the sizes we accept
  std::size_t r = 1;
  for (int t = 1; t <= k; ++t) r = r * (q - 1 + t) / t;
  return r;
}

}  // namespace

InputEnumeration enumerate_inputs(const QuantizedFunction& f, EnumerationMode mode,
                                  std::size_t max_rows) {
  const int k = f.node_count;
  const int q = f.level_count;

  std::size_t expected;
  if (mode == EnumerationMode::Full) {
    expected = 1;
    for (int t = 0; t < k; ++t) {
      expected *= static_cast<std::size_t>(q);
      if (expected > max_rows)
        throw std::length_error("input enumeration exceeds row cap (" +
                                std::to_string(max_rows) + ")");
    }
  } else {
    if (!f.symmetric)
      throw std::invalid_argument("multiset enumeration requires a symmetric function");
    expected = multiset_count(q, k);
    if (expected > max_rows)
      throw std::length_error("input enumeration exceeds row cap (" +
                              std::to_string(max_rows) + ")");
  }

  InputEnumeration e;
  e.mode = mode;
  e.node_count = k;
  e.level_count = q;
  e.rows.reserve(expected);

  std::vector<int> tuple(k, 0);
  if (mode == EnumerationMode::Full) {
    // odometer in lexicographic order
    while (true) {
      e.rows.push_back(tuple);
      int pos = k - 1;
      while (pos >= 0 && tuple[pos] == q - 1) tuple[pos--] = 0;
      if (pos < 0) break;
      ++tuple[pos];
    }
  } else {
    // non-decreasing representatives in lexicographic order
    while (true) {
      e.rows.push_back(tuple);
      int pos = k - 1;
      while (pos >= 0 && tuple[pos] == q - 1) --pos;
      if (pos < 0) break;
      int v = tuple[pos] + 1;
      for (int t = pos; t < k; ++t) tuple[t] = v;
    }
  }

  e.output_values.reserve(e.rows.size());
  for (const auto& row : e.rows) e.output_values.push_back(f.evaluate_levels(row));
  return e;
}

ConstraintSet constraint_pairs(const InputEnumeration& enumeration, double epsilon) {
  if (epsilon <= 0) throw std::invalid_argument("epsilon must be positive");
  ConstraintSet cs;
  cs.epsilon = epsilon;
  const int m = enumeration.num_rows();
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      double df = enumeration.output_values[i] - enumeration.output_values[j];
      if (df != 0.0) cs.pairs.push_back({i, j, epsilon * df * df});
    }
  }
  return cs;
}

std::string to_text(const InputEnumeration& enumeration) {
  std::ostringstream os;
  os << "mode " << (enumeration.mode == EnumerationMode::Full ? "full" : "multiset")
     << "\nk " << enumeration.node_count << "\nq " << enumeration.level_count
     << "\nm " << enumeration.num_rows() << "\n";
  char buf[64];
  for (int i = 0; i < enumeration.num_rows(); ++i) {
    os << "row";
    for (int v : enumeration.rows[i]) os << ' ' << v;
    std::snprintf(buf, sizeof buf, "%.17g", enumeration.output_values[i]);
    os << " -> " << buf << "\n";
  }
  return os.str();
}

}  // namespace rechcomp
