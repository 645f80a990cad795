#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mbaw/network.hpp"

namespace mbaw::io {

enum class FrequencyUnit { Hz, kHz, MHz, GHz };
enum class TouchstoneFormat { RI, MA, DB };

std::string to_string(FrequencyUnit unit);
std::string to_string(TouchstoneFormat format);
TouchstoneFormat touchstone_format_from_string(const std::string& text);
double unit_scale(FrequencyUnit unit);

/// `# <unit> S <format> R <ohm>`; Touchstone v1 defaults are GHz S MA R 50.
struct OptionLine {
  FrequencyUnit unit = FrequencyUnit::GHz;
  TouchstoneFormat format = TouchstoneFormat::MA;
  double reference_resistance = 50.0;
};

struct TouchstoneRow {
  std::size_t line = 0;  // 1-based source line
  std::vector<double> values;
};

struct TouchstoneDocument {
  OptionLine option;
  std::vector<TouchstoneRow> rows;
  std::vector<std::string> comments;  // `!` comment text, in order
};

/// Tokenizes and checks structure. Row arity must be 3 (one-port) or 9
/// (two-port) and consistent; `ports` forces one of them.
TouchstoneDocument parse_touchstone(std::string_view text, std::optional<int> ports = {});

SParameterSet to_sparameters(const TouchstoneDocument& doc);

SParameterSet read_touchstone(std::string_view text, std::optional<int> ports = {});

/// Deterministic text: 17 significant digits, lowercase exponent.
std::string write_touchstone(const SParameterSet& set, TouchstoneFormat format = TouchstoneFormat::RI,
                             FrequencyUnit unit = FrequencyUnit::GHz);

/// Port count follows the .s1p / .s2p extension when present.
SParameterSet read_touchstone_file(const std::filesystem::path& path);
void write_touchstone_file(const std::filesystem::path& path, const SParameterSet& set,
                           TouchstoneFormat format = TouchstoneFormat::RI, FrequencyUnit unit = FrequencyUnit::GHz);

}  // namespace mbaw::io
