#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ngrc {

/// Flat key/value config: one `key = value` per line, `#` comments.
/// Keys keep their file order so serialization round-trips stably.
class Config {
 public:
  Config() = default;

  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text);

  bool has(const std::string& key) const;
  void set(const std::string& key, const std::string& value);

  /// Typed getters throw Err::MissingConfigKey / Err::BadConfigValue with
  /// the offending key name.
  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  /// Comma-separated list of reals, e.g. "0.1,0.2,0.3".
  std::vector<double> get_double_list(const std::string& key) const;
  std::vector<std::uint64_t> get_uint_list(const std::string& key) const;

  std::string serialize() const;
  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

 private:
  const std::string* find(const std::string& key) const;
  std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace ngrc
