#pragma once

#include <cstdint>
#include <string>

#include "meanfield/lattice.hpp"

namespace meanfield {

// Identity of a persisted complex vector: lattice size, basis cutoff (0 for
// plain wavefunctions), content hash of the basis, and the trajectory time.
struct SnapshotMeta {
  int sites = 0;
  int n_max = 0;
  std::uint64_t basis_hash = 0;
  double time = 0.0;
};

// Writes base + ".bin" (little-endian f64, interleaved re, im) and
// base + ".json" with the metadata and element count.
void write_snapshot(const std::string& base, const Eigen::VectorXcd& v, const SnapshotMeta& meta);

// Reads a pair written by write_snapshot; sizes are cross-checked.
Eigen::VectorXcd read_snapshot(const std::string& base, SnapshotMeta* meta = nullptr);

}  // namespace meanfield
