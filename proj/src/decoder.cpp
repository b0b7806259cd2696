#include "rechcomp/decoder.hpp"

#include <algorithm>
#include <cstring>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace rechcomp {

namespace {

struct BitwiseKey {
  std::vector<unsigned char> bytes;
  bool operator==(const BitwiseKey& o) const { return bytes == o.bytes; }
};

struct BitwiseKeyHash {
  std::size_t operator()(const BitwiseKey& k) const {
    std::size_t h = 1469598103934665603ull;
    for (unsigned char b : k.bytes) {
      h ^= b;
      h *= 1099511628211ull;
    }
    return h;
  }
};

BitwiseKey make_key(const Eigen::VectorXcd& v, double f) {
  BitwiseKey k;
  k.bytes.resize(v.size() * sizeof(std::complex<double>) + sizeof(double));
  std::memcpy(k.bytes.data(), v.data(), v.size() * sizeof(std::complex<double>));
  std::memcpy(k.bytes.data() + v.size() * sizeof(std::complex<double>), &f,
              sizeof(double));
  return k;
}

double min_distinct_distance(const Codebook& cb) {
  double best = std::numeric_limits<double>::infinity();
  const int m = static_cast<int>(cb.entries.size());
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      if (cb.entries[i].f == cb.entries[j].f) continue;
      if (cb.entries[i].group == cb.entries[j].group) continue;
      best = std::min(best, (cb.entries[i].v - cb.entries[j].v).norm());
    }
  return best;
}

void refresh_group_outputs(Codebook& cb) {
  for (auto& g : cb.groups) {
    // mean over distinct outputs: tuple multiplicity carries no weight
    std::vector<double> outs;
    for (int e : g.members) outs.push_back(cb.entries[e].f);
    std::sort(outs.begin(), outs.end());
    outs.erase(std::unique(outs.begin(), outs.end()), outs.end());
    g.decoded_output = std::accumulate(outs.begin(), outs.end(), 0.0) /
                       static_cast<double>(outs.size());
  }
}

}  // namespace

Codebook build_codebook(const InputEnumeration& enumeration,
                        const Eigen::VectorXcd& x, const CodeMatrix& code) {
  if (x.size() != enumeration.vector_size() || code.rows() != x.size())
    throw std::invalid_argument("design dimensions do not match enumeration");

  Codebook cb;
  cb.slots = code.slots();
  const int m = enumeration.num_rows();
  cb.entries.reserve(m);

  std::unordered_map<BitwiseKey, int, BitwiseKeyHash> group_of;
  for (int i = 0; i < m; ++i) {
    CodebookEntry e;
    e.v = Eigen::VectorXcd::Zero(cb.slots);
    auto sup = enumeration.support(i);
    for (int l = 0; l < cb.slots; ++l) {
      std::complex<double> acc = 0;
      for (int col : sup)
        if (code.bits(col, l)) acc += x[col];
      e.v[l] = acc;
    }
    e.f = enumeration.output_values[i];
    auto key = make_key(e.v, e.f);
    auto it = group_of.find(key);
    if (it == group_of.end()) {
      e.group = static_cast<int>(cb.groups.size());
      group_of.emplace(std::move(key), e.group);
      cb.groups.push_back({{i}, e.f});
    } else {
      e.group = it->second;
      cb.groups[e.group].members.push_back(i);
    }
    cb.entries.push_back(std::move(e));
  }
  refresh_group_outputs(cb);
  cb.min_pair_distance = min_distinct_distance(cb);
  return cb;
}

Codebook merge_unresolved(Codebook codebook, const ConstraintSet& constraints,
                          double tol) {
  const int g = static_cast<int>(codebook.groups.size());
  std::vector<int> parent(g);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };

  for (const auto& pr : constraints.pairs) {
    const auto& ei = codebook.entries.at(pr.i);
    const auto& ej = codebook.entries.at(pr.j);
    double dist = (ei.v - ej.v).squaredNorm();
    if (pr.delta_f - dist > tol) {
      int a = find(ei.group), b = find(ej.group);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }

  // compact the union-find roots into dense group ids, preserving order
  std::vector<int> remap(g, -1);
  int next = 0;
  for (int i = 0; i < g; ++i)
    if (find(i) == i) remap[i] = next++;

  std::vector<CodebookGroup> merged(next);
  for (int i = 0; i < g; ++i) {
    int root = remap[find(i)];
    for (int e : codebook.groups[i].members) {
      merged[root].members.push_back(e);
      codebook.entries[e].group = root;
    }
  }
  for (auto& grp : merged) std::sort(grp.members.begin(), grp.members.end());
  codebook.groups = std::move(merged);
  refresh_group_outputs(codebook);
  codebook.min_pair_distance = min_distinct_distance(codebook);
  return codebook;
}

DecodeResult decode(const Eigen::VectorXcd& y, const Codebook& codebook) {
  if (codebook.entries.empty()) throw std::invalid_argument("empty codebook");
  if (y.size() != codebook.slots)
    throw std::invalid_argument("received sequence length does not match codebook");

  DecodeResult res;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < codebook.entries.size(); ++i) {
    double d = (y - codebook.entries[i].v).squaredNorm();
    if (d < best) {
      best = d;
      res.entry_index = static_cast<int>(i);
    }
  }
  res.value = codebook.groups[codebook.entries[res.entry_index].group].decoded_output;
  return res;
}

}  // namespace rechcomp
