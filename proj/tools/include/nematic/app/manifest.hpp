#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace nematic::app {

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::string& path);
/// UTC time as ISO 8601.
std::string utc_now();

struct InventoryEntry {
  std::string path;  // relative to the run directory
  std::uintmax_t bytes = 0;
  std::string sha256;
};

/// Provenance record of one run. The hash chain starts from the config hash,
/// folds in version and seed, then every inventory entry in path order, so it
/// does not depend on timestamps.
struct RunManifest {
  std::string config_hash;
  std::string version;
  std::uint64_t seed = 0;
  std::string started;
  std::string finished;
  std::string status = "running";
  std::vector<InventoryEntry> inventory;
  std::vector<std::string> chain;

  void rebuild_chain();
  std::string to_json() const;
  /// Writes to a temporary sibling and renames it into place.
  void write_atomic(const std::string& path) const;
  /// Hashes every regular file below dir except the manifest itself.
  void take_inventory(const std::string& dir, const std::string& manifest_name);
};

}  // namespace nematic::app
