#pragma once

#include <string>
#include <utility>
#include <vector>

#include "nematic/grid.hpp"

namespace nematic {

/// Named scalar arrays sampled on one grid at one instant.
/// The byte layout is described in docs/snapshot_format.md.
struct Snapshot {
  GridPtr grid;
  double time = 0.0;
  std::vector<std::pair<std::string, ScalarField>> fields;
};

inline constexpr char kSnapshotMagic[8] = {'N', 'E', 'M', 'S', 'N', 'A', 'P', '\0'};
inline constexpr unsigned kSnapshotVersion = 1;

void write_snapshot(const std::string& path, const Snapshot& snap);
Snapshot read_snapshot(const std::string& path);

}  // namespace nematic
