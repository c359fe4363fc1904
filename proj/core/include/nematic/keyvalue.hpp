#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace nematic::kv {

struct Entry {
  std::string key;
  std::string value;
  int line = 0;
};

struct Section {
  std::string name;
  int line = 0;
  std::vector<Entry> entries;

  const Entry* find(std::string_view key) const;
  std::vector<const Entry*> find_all(std::string_view key) const;
};

/// Sectioned key-value text: `[section]` headers, `key = value` lines, and
/// comments introduced by `#`. Keys may repeat; lookups return the first.
struct Document {
  std::string source;
  std::vector<Section> sections;

  const Section* find(std::string_view name) const;
};

Document parse(std::string_view text, std::string source = "<string>");
Document load(const std::string& path);

/// Value readers; failures raise a config error naming source:line and key.
double to_real(const Document& doc, const Entry& e);
long to_integer(const Document& doc, const Entry& e);
bool to_bool(const Document& doc, const Entry& e);
std::vector<double> to_real_list(const Document& doc, const Entry& e);

[[noreturn]] void fail(const Document& doc, const Entry& e, const std::string& message);
[[noreturn]] void fail(const Document& doc, int line, const std::string& message);

}  // namespace nematic::kv
