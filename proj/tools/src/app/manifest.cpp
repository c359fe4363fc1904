#include "nematic/app/manifest.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "nematic/error.hpp"

namespace nematic::app {

namespace fs = std::filesystem;

namespace {

class Sha256 {
public:
  Sha256() : ctx_(EVP_MD_CTX_new()) {
    if (!ctx_ || EVP_DigestInit_ex(ctx_, EVP_sha256(), nullptr) != 1)
      throw Error(ErrorCode::Io, "sha256 initialisation failed");
  }
  ~Sha256() { EVP_MD_CTX_free(ctx_); }
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  void update(const void* data, std::size_t n) { EVP_DigestUpdate(ctx_, data, n); }

  std::string hex() {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned len = 0;
    EVP_DigestFinal_ex(ctx_, md, &len);
    static const char* digits = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
      out += digits[md[i] >> 4];
      out += digits[md[i] & 15];
    }
    return out;
  }

private:
  EVP_MD_CTX* ctx_;
};

}  // namespace

std::string sha256_hex(const std::string& bytes) {
  Sha256 h;
  h.update(bytes.data(), bytes.size());
  return h.hex();
}

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, path + ": cannot open for hashing");
  Sha256 h;
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    h.update(buf, static_cast<std::size_t>(in.gcount()));
  }
  return h.hex();
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void RunManifest::rebuild_chain() {
  chain.clear();
  chain.push_back(config_hash);
  chain.push_back(sha256_hex(chain.back() + "\n" + version + "\n" + std::to_string(seed)));
  std::vector<InventoryEntry> sorted = inventory;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.path < b.path; });
  for (const auto& e : sorted) chain.push_back(sha256_hex(chain.back() + "\n" + e.path + "\n" + e.sha256));
}

std::string RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["config_hash"] = config_hash;
  j["version"] = version;
  j["seed"] = seed;
  j["started"] = started;
  j["finished"] = finished;
  j["status"] = status;
  nlohmann::ordered_json inv = nlohmann::ordered_json::array();
  for (const auto& e : inventory) inv.push_back({{"path", e.path}, {"bytes", e.bytes}, {"sha256", e.sha256}});
  j["inventory"] = inv;
  j["hash_chain"] = chain;
  return j.dump(2) + "\n";
}

void RunManifest::write_atomic(const std::string& path) const {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, tmp + ": cannot open for writing");
    out << to_json();
    out.flush();
    if (!out) throw Error(ErrorCode::Io, tmp + ": write failed");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::Io, path + ": rename failed: " + ec.message());
}

void RunManifest::take_inventory(const std::string& dir, const std::string& manifest_name) {
  inventory.clear();
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    const std::string rel = fs::relative(e.path(), dir).generic_string();
    if (rel == manifest_name || rel == manifest_name + ".tmp") continue;
    inventory.push_back({rel, e.file_size(), sha256_file(e.path().string())});
  }
  std::sort(inventory.begin(), inventory.end(), [](const auto& a, const auto& b) { return a.path < b.path; });
  rebuild_chain();
}

}  // namespace nematic::app
