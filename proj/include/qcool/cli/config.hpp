#pragma once

// Plain-text run configuration: one `key = value` per line, `#` starts a
// comment. Keys are case-sensitive; later lines override earlier ones.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qcool::cli {

/// Validation failure tied to one configuration key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(key + ": " + message), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

class Config {
 public:
  static Config parse(std::istream& is);
  static Config parse_string(const std::string& text);
  static Config load(const std::string& path);

  /// Canonical text form: keys sorted, one `key = value` per line.
  std::string serialize() const;

  void set(const std::string& key, std::string value);
  bool has(const std::string& key) const;
  const std::map<std::string, std::string>& entries() const noexcept { return values_; }

  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  std::uint64_t get_u64(const std::string& key) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;

  /// Axis values written either as `lo:hi:steps` or as a comma list.
  std::vector<double> get_axis(const std::string& key) const;

  /// Whitespace-separated numbers.
  std::vector<double> get_numbers(const std::string& key) const;

  /// Keys beginning with `prefix`, with the prefix removed.
  std::vector<std::string> keys_with_prefix(const std::string& prefix) const;

  bool operator==(const Config&) const = default;

 private:
  std::map<std::string, std::string> values_;
};

double parse_double(const std::string& key, const std::string& text);

}  // namespace qcool::cli
