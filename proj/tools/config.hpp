#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace qdlab {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Sectioned key=value text. Keys are addressed as "section.key".
class Config {
 public:
  static Config parse(const std::string& text, const std::string& origin = "<config>");
  static Config load(const std::string& path);

  // "section.key=value"
  void applyOverride(const std::string& assignment);
  void set(const std::string& key, const std::string& value);

  bool has(const std::string& key) const;
  std::string getString(const std::string& key, const std::string& fallback) const;
  std::string requireString(const std::string& key) const;
  double getDouble(const std::string& key, double fallback) const;
  int getInt(const std::string& key, int fallback) const;
  std::uint64_t getUint64(const std::string& key, std::uint64_t fallback) const;
  std::uint64_t requireUint64(const std::string& key) const;
  std::vector<double> getDoubleList(const std::string& key, const std::vector<double>& fallback) const;

  // Keys present but never read.
  std::vector<std::string> unusedKeys() const;
  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::string where(const std::string& key) const;
  std::map<std::string, std::string> values_;
  std::map<std::string, std::string> origins_;
  mutable std::set<std::string> used_;
};

std::vector<std::string> splitList(const std::string& s, char sep);

}  // namespace qdlab
