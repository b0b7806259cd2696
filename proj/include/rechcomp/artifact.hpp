#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "rechcomp/codesign.hpp"

namespace rechcomp {

// Plain-text design record: one `key = value` line per scalar, one `x = re im`
// line per modulation entry (17 significant digits) and one `c = 0/1...` line
// per code row.
struct DesignArtifact {
  int node_count = 0;   // K
  int level_count = 0;  // Q
  int slot_count = 0;   // L
  double epsilon = 0;
  double p_max = 0;
  std::string status;
  Eigen::VectorXcd x;
  std::vector<std::string> code_rows;
  std::vector<double> margins;
};

DesignArtifact make_artifact(const DesignResult& design, int node_count,
                             int level_count, double epsilon);

std::string to_text(const DesignArtifact& artifact);
DesignArtifact artifact_from_text(const std::string& text);

void write_artifact(const DesignArtifact& artifact, const std::string& path);
DesignArtifact read_artifact(const std::string& path);

}  // namespace rechcomp
