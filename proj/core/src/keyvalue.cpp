#include "nematic/keyvalue.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "nematic/error.hpp"

namespace nematic::kv {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

}  // namespace

const Entry* Section::find(std::string_view key) const {
  for (const auto& e : entries)
    if (e.key == key) return &e;
  return nullptr;
}

std::vector<const Entry*> Section::find_all(std::string_view key) const {
  std::vector<const Entry*> out;
  for (const auto& e : entries)
    if (e.key == key) out.push_back(&e);
  return out;
}

const Section* Document::find(std::string_view name) const {
  for (const auto& s : sections)
    if (s.name == name) return &s;
  return nullptr;
}

void fail(const Document& doc, int line, const std::string& message) {
  throw Error(ErrorCode::Config, doc.source + ":" + std::to_string(line) + ": " + message);
}

void fail(const Document& doc, const Entry& e, const std::string& message) {
  fail(doc, e.line, "'" + e.key + "': " + message);
}

Document parse(std::string_view text, std::string source) {
  Document doc;
  doc.source = std::move(source);
  std::size_t pos = 0;
  int line_no = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.find('=') == std::string_view::npos) {
      if (line.back() != ']') fail(doc, line_no, "unterminated section header");
      const auto name = trim(line.substr(1, line.size() - 2));
      if (name.empty()) fail(doc, line_no, "empty section name");
      doc.sections.push_back(Section{std::string(name), line_no, {}});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(doc, line_no, "expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty()) fail(doc, line_no, "missing key");
    if (doc.sections.empty()) fail(doc, line_no, "entry outside of any section");
    doc.sections.back().entries.push_back(Entry{std::string(key), std::string(value), line_no});
  }
  return doc;
}

Document load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Config, path + ": cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

double to_real(const Document& doc, const Entry& e) {
  double v = 0.0;
  if (!parse_double(e.value, v)) fail(doc, e, "expected a finite real number, got '" + e.value + "'");
  return v;
}

long to_integer(const Document& doc, const Entry& e) {
  const auto s = trim(e.value);
  long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) fail(doc, e, "expected an integer, got '" + e.value + "'");
  return v;
}

bool to_bool(const Document& doc, const Entry& e) {
  const auto s = trim(e.value);
  if (s == "true" || s == "yes" || s == "on" || s == "1") return true;
  if (s == "false" || s == "no" || s == "off" || s == "0") return false;
  fail(doc, e, "expected true or false, got '" + e.value + "'");
}

std::vector<double> to_real_list(const Document& doc, const Entry& e) {
  auto s = trim(e.value);
  if (s.size() < 2 || s.front() != '[' || s.back() != ']')
    fail(doc, e, "expected a bracketed list like [1.0, 0.5]");
  s = trim(s.substr(1, s.size() - 2));
  std::vector<double> out;
  if (s.empty()) return out;
  std::size_t start = 0;
  int item = 0;
  while (true) {
    const auto comma = s.find(',', start);
    const auto piece = s.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    ++item;
    double v = 0.0;
    if (!parse_double(piece, v))
      fail(doc, e, "list item " + std::to_string(item) + " ('" + std::string(trim(piece)) + "') is not a finite real");
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace nematic::kv
