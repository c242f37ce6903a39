#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace qdlab {

namespace {

std::string trim(const std::string& s) {
  auto b = std::find_if_not(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
  auto e = std::find_if_not(s.rbegin(), s.rend(), [](unsigned char c) { return std::isspace(c); }).base();
  return b < e ? std::string(b, e) : std::string();
}

bool validName(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_' || c == '-' || c == '.';
  });
}

}  // namespace

std::vector<std::string> splitList(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

Config Config::parse(const std::string& text, const std::string& origin) {
  Config cfg;
  std::istringstream in(text);
  std::string line, section;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string at = origin + ":" + std::to_string(lineNo);
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(at + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!validName(section)) throw ConfigError(at + ": invalid section name '" + section + "'");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(at + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (!validName(key)) throw ConfigError(at + ": invalid key '" + key + "'");
    const std::string full = section.empty() ? key : section + "." + key;
    if (cfg.values_.count(full)) throw ConfigError(at + ": duplicate key '" + full + "'");
    cfg.values_[full] = trim(line.substr(eq + 1));
    cfg.origins_[full] = at;
  }
  return cfg;
}

Config Config::load(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str(), path);
}

void Config::applyOverride(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("override '" + assignment + "': expected section.key=value");
  const std::string key = trim(assignment.substr(0, eq));
  if (!validName(key)) throw ConfigError("override '" + assignment + "': invalid key");
  values_[key] = trim(assignment.substr(eq + 1));
  origins_[key] = "command line";
}

void Config::set(const std::string& key, const std::string& value) {
  values_[key] = value;
  origins_[key] = "command line";
}

bool Config::has(const std::string& key) const { return values_.count(key) > 0; }

std::string Config::where(const std::string& key) const {
  auto it = origins_.find(key);
  return (it == origins_.end() ? std::string("default") : it->second) + ": field '" + key + "'";
}

std::string Config::getString(const std::string& key, const std::string& fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  used_.insert(key);
  return it->second;
}

std::string Config::requireString(const std::string& key) const {
  if (!has(key)) throw ConfigError("missing required field '" + key + "'");
  return getString(key, "");
}

double Config::getDouble(const std::string& key, double fallback) const {
  if (!has(key)) return fallback;
  const std::string s = getString(key, "");
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw ConfigError(where(key) + ": not a number: '" + s + "'");
  return v;
}

int Config::getInt(const std::string& key, int fallback) const {
  if (!has(key)) return fallback;
  const std::string s = getString(key, "");
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw ConfigError(where(key) + ": not an integer: '" + s + "'");
  return v;
}

std::uint64_t Config::getUint64(const std::string& key, std::uint64_t fallback) const {
  if (!has(key)) return fallback;
  const std::string s = getString(key, "");
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw ConfigError(where(key) + ": not an unsigned integer: '" + s + "'");
  return v;
}

std::uint64_t Config::requireUint64(const std::string& key) const {
  if (!has(key)) throw ConfigError("missing required field '" + key + "'");
  return getUint64(key, 0);
}

std::vector<double> Config::getDoubleList(const std::string& key, const std::vector<double>& fallback) const {
  if (!has(key)) return fallback;
  std::vector<double> out;
  for (const auto& item : splitList(getString(key, ""), ',')) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc() || p != item.data() + item.size() || item.empty())
      throw ConfigError(where(key) + ": not a number list");
    out.push_back(v);
  }
  return out;
}

std::vector<std::string> Config::unusedKeys() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : values_)
    if (!used_.count(k)) out.push_back(k);
  return out;
}

}  // namespace qdlab
