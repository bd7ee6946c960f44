#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace edsa::config {

// Flat `key = value` config. Unknown keys are an error; flags override.
// Every key falls back to the module default when absent.
class Config {
 public:
  static Config from_file(const std::string& path);
  static Config from_text(const std::string& text);
  Config() = default;

  void set(const std::string& key, const std::string& value);  // validates key
  bool has(const std::string& key) const;

  std::string get_str(const std::string& key, const std::string& def) const;
  int64_t get_int(const std::string& key, int64_t def) const;
  double get_double(const std::string& key, double def) const;
  bool get_bool(const std::string& key, bool def) const;

  // FNV-1a over the sorted canonical key=value lines, hex string.
  std::string hash() const;

  const std::map<std::string, std::string>& entries() const { return kv_; }

  static const std::vector<std::string>& known_keys();

 private:
  std::map<std::string, std::string> kv_;
};

}  // namespace edsa::config
