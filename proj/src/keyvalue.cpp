#include "cranest/keyvalue.hpp"

#include <charconv>
#include <fstream>
#include <limits>

#include "cranest/errors.hpp"
#include "cranest/matcore.hpp"

namespace cranest {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& text, char sep) {
  std::vector<std::string> out;
  if (trim(text).empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    out.push_back(trim(text.substr(start, pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

KeyValues KeyValues::parse(std::istream& is) {
  KeyValues kv;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    require(eq != std::string::npos, ErrorKind::parse,
            "line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(t.substr(0, eq));
    require(!key.empty(), ErrorKind::parse, "line " + std::to_string(lineno) + ": empty key");
    require(kv.values_.count(key) == 0, ErrorKind::parse,
            "line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    kv.values_[key] = trim(t.substr(eq + 1));
  }
  return kv;
}

KeyValues KeyValues::load(const std::string& path) {
  std::ifstream is(path);
  require(static_cast<bool>(is), ErrorKind::io, "cannot open '" + path + "'");
  return parse(is);
}

const std::string& KeyValues::get(const std::string& key) const {
  auto it = values_.find(key);
  require(it != values_.end(), ErrorKind::parse, "missing key '" + key + "'");
  return it->second;
}

std::string KeyValues::get_or(const std::string& key, const std::string& fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double KeyValues::get_double(const std::string& key) const {
  const std::string& v = get(key);
  if (v == "inf") return std::numeric_limits<double>::infinity();
  return parse_double(v);
}

double KeyValues::get_double_or(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

long long KeyValues::get_int(const std::string& key) const {
  const std::string& v = get(key);
  long long out = 0;
  auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  require(res.ec == std::errc() && res.ptr == v.data() + v.size(), ErrorKind::parse,
          "key '" + key + "': not an integer: '" + v + "'");
  return out;
}

long long KeyValues::get_int_or(const std::string& key, long long fallback) const {
  return has(key) ? get_int(key) : fallback;
}

unsigned long long KeyValues::get_u64(const std::string& key) const {
  const std::string& v = get(key);
  unsigned long long out = 0;
  auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  require(res.ec == std::errc() && res.ptr == v.data() + v.size(), ErrorKind::parse,
          "key '" + key + "': not an unsigned integer: '" + v + "'");
  return out;
}

bool KeyValues::get_bool_or(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string& v = get(key);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  fail(ErrorKind::parse, "key '" + key + "': not a boolean: '" + v + "'");
}

}  // namespace cranest
