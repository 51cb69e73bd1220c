#pragma once

// Flat `section.key = value` settings. Files are read line by line; '#'
// starts a comment. Later assignments (including command-line overrides)
// replace earlier ones.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "scent/errors.hpp"

namespace scent {

class Settings {
 public:
  static Settings parse(std::istream& in, const std::string& source = "<input>") {
    Settings s;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      const std::string_view body = trim(line);
      if (body.empty()) continue;
      const auto eq = body.find('=');
      if (eq == std::string_view::npos) {
        throw ConfigError(source + ":" + std::to_string(line_no) + ": expected 'section.key = value'");
      }
      const std::string key(trim(body.substr(0, eq)));
      if (key.empty() || key.find('.') == std::string::npos) {
        throw ConfigError(source + ":" + std::to_string(line_no) + ": key '" + key + "' must be section.key");
      }
      s.values_[key] = std::string(trim(body.substr(eq + 1)));
    }
    return s;
  }

  static Settings load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    return parse(in, path);
  }

  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  void merge(const Settings& other) {
    for (const auto& [k, v] : other.values_) values_[k] = v;
  }
  bool has(const std::string& key) const { return values_.count(key) > 0; }
  const std::map<std::string, std::string>& values() const { return values_; }

  std::optional<std::string> raw(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
  }

  std::string get_string(const std::string& key, const std::string& fallback) const {
    return raw(key).value_or(fallback);
  }

  double get_double(const std::string& key, double fallback) const {
    auto v = raw(key);
    return v ? to_double(key, *v) : fallback;
  }

  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const {
    auto v = raw(key);
    return v ? to_u64(key, *v) : fallback;
  }

  bool get_bool(const std::string& key, bool fallback) const {
    auto v = raw(key);
    if (!v) return fallback;
    if (*v == "true" || *v == "1" || *v == "on" || *v == "yes") return true;
    if (*v == "false" || *v == "0" || *v == "off" || *v == "no") return false;
    throw ConfigError(key + ": expected a boolean, got '" + *v + "'");
  }

  std::vector<std::string> get_strings(const std::string& key, const std::vector<std::string>& fallback) const {
    auto v = raw(key);
    if (!v) return fallback;
    std::vector<std::string> out;
    std::string_view rest(*v);
    while (true) {
      const auto comma = rest.find(',');
      const auto item = trim(rest.substr(0, comma));
      if (!item.empty()) out.emplace_back(item);
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (out.empty()) throw ConfigError(key + ": empty list");
    return out;
  }

  std::vector<double> get_doubles(const std::string& key, const std::vector<double>& fallback) const {
    if (!has(key)) return fallback;
    std::vector<double> out;
    for (const auto& s : get_strings(key, {})) out.push_back(to_double(key, s));
    return out;
  }

  std::vector<std::uint64_t> get_u64s(const std::string& key, const std::vector<std::uint64_t>& fallback) const {
    if (!has(key)) return fallback;
    std::vector<std::uint64_t> out;
    for (const auto& s : get_strings(key, {})) out.push_back(to_u64(key, s));
    return out;
  }

  // Method-scoped lookup: "<method>.<key>" first, then "optimizer.<key>".
  std::optional<std::string> scoped(const std::string& method, const std::string& key) const {
    if (auto v = raw(method + "." + key)) return v;
    return raw("optimizer." + key);
  }
  double scoped_double(const std::string& method, const std::string& key, double fallback) const {
    auto v = scoped(method, key);
    return v ? to_double(method + "." + key, *v) : fallback;
  }

  // Rejects keys outside the given sections/keys. An entry "section.*"
  // admits every key of that section.
  void check_known(const std::set<std::string>& allowed) const {
    for (const auto& [k, v] : values_) {
      if (allowed.count(k)) continue;
      const std::string section = k.substr(0, k.find('.'));
      if (allowed.count(section + ".*")) continue;
      throw ConfigError("unknown setting '" + k + "'");
    }
  }

  static double to_double(const std::string& key, const std::string& s) {
    std::string_view v = trim(s);
    if (!v.empty() && v.front() == '+') v.remove_prefix(1);
    double out = 0.0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (v.empty() || res.ec != std::errc() || res.ptr != v.data() + v.size()) {
      throw ConfigError(key + ": expected a number, got '" + s + "'");
    }
    return out;
  }

  static std::uint64_t to_u64(const std::string& key, const std::string& s) {
    const std::string_view v = trim(s);
    std::uint64_t out = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (v.empty() || res.ec != std::errc() || res.ptr != v.data() + v.size()) {
      // Accept integral values written in floating notation such as 1e6.
      const double d = to_double(key, s);
      if (d >= 0.0 && d < 1.8e19 && d == static_cast<double>(static_cast<std::uint64_t>(d))) {
        return static_cast<std::uint64_t>(d);
      }
      throw ConfigError(key + ": expected a nonnegative integer, got '" + s + "'");
    }
    return out;
  }

 private:
  static std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
  }

  std::map<std::string, std::string> values_;
};

}  // namespace scent
