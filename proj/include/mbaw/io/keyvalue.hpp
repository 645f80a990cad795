#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mbaw::io {

/// Ordered `key = value` document with `#` comments. Used for topology,
/// design spec, geometry, spur and run-config files, and for reports.
class KeyValueDocument {
 public:
  static KeyValueDocument parse(std::string_view text);

  void set(std::string key, std::string value);
  void set(std::string key, double value);
  void set(std::string key, int value);
  void set(std::string key, bool value);
  void add_comment(std::string text) { header_.push_back(std::move(text)); }

  bool contains(std::string_view key) const;
  std::optional<std::string> find(std::string_view key) const;

  /// Typed accessors throw Error{parse} naming the key when it is missing or
  /// malformed.
  std::string get_string(std::string_view key) const;
  double get_double(std::string_view key) const;
  int get_int(std::string_view key) const;
  bool get_bool(std::string_view key) const;
  std::vector<double> get_doubles(std::string_view key) const;
  std::vector<int> get_ints(std::string_view key) const;

  double get_double(std::string_view key, double fallback) const;
  int get_int(std::string_view key, int fallback) const;
  bool get_bool(std::string_view key, bool fallback) const;
  std::string get_string(std::string_view key, std::string fallback) const;

  /// Requires `spec_version` to equal `expected`.
  void require_version(int expected, std::string_view what) const;

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

  std::string serialize() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace mbaw::io
