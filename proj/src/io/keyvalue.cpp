#include "mbaw/io/keyvalue.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "mbaw/error.hpp"
#include "mbaw/io/text.hpp"

namespace mbaw::io {

namespace {

[[noreturn]] void bad_key(std::string_view key, const std::string& why) {
  throw Error(ErrorCategory::parse, "key '" + std::string(key) + "': " + why);
}

int parse_int(std::string_view key, std::string_view text) {
  int v = 0;
  const auto t = trim(text);
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size()) bad_key(key, "expected an integer, got '" + std::string(t) + "'");
  return v;
}

}  // namespace

KeyValueDocument KeyValueDocument::parse(std::string_view text) {
  KeyValueDocument doc;
  const auto all = lines(text);
  for (std::size_t n = 0; n < all.size(); ++n) {
    const auto l = trim(all[n]);
    if (l.empty() || l.front() == '#') continue;
    const auto eq = l.find('=');
    std::ostringstream where;
    where << "line " << n + 1 << ": ";
    if (eq == std::string_view::npos) throw Error(ErrorCategory::parse, where.str() + "expected 'key = value'");
    std::string key(trim(l.substr(0, eq)));
    std::string value(trim(l.substr(eq + 1)));
    if (key.empty()) throw Error(ErrorCategory::parse, where.str() + "empty key");
    if (doc.contains(key)) throw Error(ErrorCategory::parse, where.str() + "duplicate key '" + key + "'");
    doc.entries_.emplace_back(std::move(key), std::move(value));
  }
  return doc;
}

void KeyValueDocument::set(std::string key, std::string value) {
  auto it = std::find_if(entries_.begin(), entries_.end(), [&](const auto& e) { return e.first == key; });
  if (it != entries_.end()) {
    it->second = std::move(value);
    return;
  }
  entries_.emplace_back(std::move(key), std::move(value));
}

void KeyValueDocument::set(std::string key, double value) { set(std::move(key), format_number(value)); }
void KeyValueDocument::set(std::string key, int value) { set(std::move(key), std::to_string(value)); }
void KeyValueDocument::set(std::string key, bool value) { set(std::move(key), std::string(value ? "true" : "false")); }

bool KeyValueDocument::contains(std::string_view key) const { return find(key).has_value(); }

std::optional<std::string> KeyValueDocument::find(std::string_view key) const {
  for (const auto& [k, v] : entries_)
    if (k == key) return v;
  return std::nullopt;
}

std::string KeyValueDocument::get_string(std::string_view key) const {
  auto v = find(key);
  if (!v) bad_key(key, "missing");
  return *v;
}

double KeyValueDocument::get_double(std::string_view key) const {
  const auto v = get_string(key);
  try {
    return parse_number(v, "number");
  } catch (const Error&) {
    bad_key(key, "expected a number, got '" + v + "'");
  }
}

int KeyValueDocument::get_int(std::string_view key) const { return parse_int(key, get_string(key)); }

bool KeyValueDocument::get_bool(std::string_view key) const {
  const auto v = get_string(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  bad_key(key, "expected true/false, got '" + v + "'");
}

std::vector<double> KeyValueDocument::get_doubles(std::string_view key) const {
  const auto v = get_string(key);
  std::vector<double> out;
  if (trim(v).empty()) return out;
  for (auto cell : split(v, ',')) {
    try {
      out.push_back(parse_number(cell, "number"));
    } catch (const Error&) {
      bad_key(key, "expected a comma-separated list of numbers");
    }
  }
  return out;
}

std::vector<int> KeyValueDocument::get_ints(std::string_view key) const {
  const auto v = get_string(key);
  std::vector<int> out;
  if (trim(v).empty()) return out;
  for (auto cell : split(v, ',')) out.push_back(parse_int(key, cell));
  return out;
}

double KeyValueDocument::get_double(std::string_view key, double fallback) const {
  return contains(key) ? get_double(key) : fallback;
}
int KeyValueDocument::get_int(std::string_view key, int fallback) const { return contains(key) ? get_int(key) : fallback; }
bool KeyValueDocument::get_bool(std::string_view key, bool fallback) const {
  return contains(key) ? get_bool(key) : fallback;
}
std::string KeyValueDocument::get_string(std::string_view key, std::string fallback) const {
  auto v = find(key);
  return v ? *v : fallback;
}

void KeyValueDocument::require_version(int expected, std::string_view what) const {
  if (!contains("spec_version"))
    throw Error(ErrorCategory::parse, std::string(what) + " file lacks 'spec_version'");
  const int v = get_int("spec_version");
  if (v != expected)
    throw Error(ErrorCategory::parse, std::string(what) + " spec_version " + std::to_string(v) + " is not supported (expected " +
                                          std::to_string(expected) + ")");
}

std::string KeyValueDocument::serialize() const {
  std::string out;
  for (const auto& h : header_) out += "# " + h + "\n";
  for (const auto& [k, v] : entries_) out += k + " = " + v + "\n";
  return out;
}

}  // namespace mbaw::io
