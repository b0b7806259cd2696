#pragma once

#include <Eigen/Dense>
#include <vector>

#include "rechcomp/codesign.hpp"

namespace rechcomp {

struct CodebookEntry {
  Eigen::VectorXcd v;  // noiseless received sequence, one sample per slot
  double f = 0;        // function output of the generating tuple
  int group = 0;
};

struct CodebookGroup {
  std::vector<int> members;   // entry indices
  double decoded_output = 0;  // mean of the distinct member outputs
};

struct Codebook {
  std::vector<CodebookEntry> entries;  // enumeration order
  std::vector<CodebookGroup> groups;
  // smallest ||v_i - v_j|| over pairs with distinct outputs in distinct
  // groups; +inf when no such pair exists
  double min_pair_distance = 0;
  int slots = 0;
};

// Noiseless codebook; entries with bitwise-equal (v, f) share a group.
Codebook build_codebook(const InputEnumeration& enumeration,
                        const Eigen::VectorXcd& x, const CodeMatrix& code);

// Unions the groups of every constraint pair whose separation requirement is
// violated by more than tol (transitively); each merged group decodes to the
// mean of its distinct member outputs.
Codebook merge_unresolved(Codebook codebook, const ConstraintSet& constraints,
                          double tol);

struct DecodeResult {
  double value = 0;
  int entry_index = -1;
};

// Joint nearest-neighbor rule over all slots; ties resolve to the lowest
// entry index.
DecodeResult decode(const Eigen::VectorXcd& y, const Codebook& codebook);

}  // namespace rechcomp
