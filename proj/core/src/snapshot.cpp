#include "nematic/snapshot.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "nematic/error.hpp"

namespace nematic {

namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <class T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
    std::reverse(bytes.begin(), bytes.end());
    return std::bit_cast<T>(bytes);
  }
}

void put_u32(std::ostream& os, std::uint32_t v) {
  v = to_little(v);
  os.write(reinterpret_cast<const char*>(&v), 4);
}

void put_f64(std::ostream& os, double v) {
  auto bits = to_little(std::bit_cast<std::uint64_t>(v));
  os.write(reinterpret_cast<const char*>(&bits), 8);
}

std::uint32_t get_u32(std::istream& is) {
  std::uint32_t v = 0;
  is.read(reinterpret_cast<char*>(&v), 4);
  if (!is) throw Error(ErrorCode::Io, "truncated snapshot header");
  return to_little(v);
}

double get_f64(std::istream& is) {
  std::uint64_t bits = 0;
  is.read(reinterpret_cast<char*>(&bits), 8);
  if (!is) throw Error(ErrorCode::Io, "truncated snapshot");
  return std::bit_cast<double>(to_little(bits));
}

}  // namespace

void write_snapshot(const std::string& path, const Snapshot& snap) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error(ErrorCode::Io, "cannot open " + path + " for writing");
  const Grid& g = *snap.grid;
  os.write(kSnapshotMagic, 8);
  put_u32(os, kSnapshotVersion);
  put_u32(os, static_cast<std::uint32_t>(g.dim()));
  for (int a = 0; a < 3; ++a) put_u32(os, a < g.dim() ? static_cast<std::uint32_t>(g.resolution(a)) : 1u);
  for (int a = 0; a < 3; ++a) put_f64(os, a < g.dim() ? g.period(a) : 0.0);
  put_u32(os, static_cast<std::uint32_t>(snap.fields.size()));
  for (const auto& [name, field] : snap.fields) {
    put_u32(os, static_cast<std::uint32_t>(name.size()));
    os.write(name.data(), static_cast<std::streamsize>(name.size()));
  }
  put_f64(os, snap.time);
  for (const auto& [name, field] : snap.fields) {
    require_same_grid(snap.grid, field.grid());
    for (double v : field.values()) put_f64(os, v);
  }
  if (!os) throw Error(ErrorCode::Io, "write failed for " + path);
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCode::Io, "cannot open " + path);
  char magic[8];
  is.read(magic, 8);
  if (!is || std::memcmp(magic, kSnapshotMagic, 8) != 0) throw Error(ErrorCode::Io, path + " is not a snapshot");
  if (get_u32(is) != kSnapshotVersion) throw Error(ErrorCode::Io, "unsupported snapshot version");
  const int dim = static_cast<int>(get_u32(is));
  if (dim != 2 && dim != 3) throw Error(ErrorCode::Io, "bad snapshot dimension");
  std::vector<int> res;
  std::vector<double> period;
  for (int a = 0; a < 3; ++a) {
    const auto r = static_cast<int>(get_u32(is));
    if (a < dim) res.push_back(r);
  }
  for (int a = 0; a < 3; ++a) {
    const double p = get_f64(is);
    if (a < dim) period.push_back(p);
  }
  Snapshot snap;
  snap.grid = Grid::make(dim, res, period);
  const std::uint32_t count = get_u32(is);
  std::vector<std::string> names;
  for (std::uint32_t f = 0; f < count; ++f) {
    const std::uint32_t len = get_u32(is);
    if (len > 4096) throw Error(ErrorCode::Io, "implausible field name length");
    std::string name(len, '\0');
    is.read(name.data(), len);
    if (!is) throw Error(ErrorCode::Io, "truncated field names");
    names.push_back(std::move(name));
  }
  snap.time = get_f64(is);
  for (auto& name : names) {
    ScalarField field(snap.grid);
    for (auto& v : field.values()) v = get_f64(is);
    snap.fields.emplace_back(std::move(name), std::move(field));
  }
  return snap;
}

}  // namespace nematic
