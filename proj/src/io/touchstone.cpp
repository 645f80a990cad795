#include "mbaw/io/touchstone.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>

#include "mbaw/io/text.hpp"

namespace mbaw::io {

namespace {

constexpr double kDegree = std::numbers::pi / 180.0;

std::string upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  std::ostringstream os;
  os << "touchstone line " << line << ": " << what;
  throw Error(ErrorCategory::parse, os.str());
}

OptionLine parse_option_line(std::string_view body, std::size_t line) {
  OptionLine opt;
  const auto tokens = split_whitespace(body);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const std::string t = upper(tokens[i]);
    if (t == "HZ") opt.unit = FrequencyUnit::Hz;
    else if (t == "KHZ") opt.unit = FrequencyUnit::kHz;
    else if (t == "MHZ") opt.unit = FrequencyUnit::MHz;
    else if (t == "GHZ") opt.unit = FrequencyUnit::GHz;
    else if (t == "S") continue;
    else if (t == "Y" || t == "Z" || t == "H" || t == "G") fail(line, "only S parameters are supported (got " + t + ")");
    else if (t == "RI") opt.format = TouchstoneFormat::RI;
    else if (t == "MA") opt.format = TouchstoneFormat::MA;
    else if (t == "DB") opt.format = TouchstoneFormat::DB;
    else if (t == "R") {
      if (i + 1 >= tokens.size()) fail(line, "option line 'R' needs a resistance value");
      opt.reference_resistance = parse_number(tokens[++i], "reference resistance", line);
      if (!(opt.reference_resistance > 0.0)) fail(line, "reference resistance must be positive");
    } else {
      fail(line, "malformed option line token '" + std::string(tokens[i]) + "'");
    }
  }
  return opt;
}

std::complex<double> decode(double a, double b, TouchstoneFormat format) {
  switch (format) {
    case TouchstoneFormat::RI: return {a, b};
    case TouchstoneFormat::MA: return std::polar(a, b * kDegree);
    case TouchstoneFormat::DB: return std::polar(std::pow(10.0, a / 20.0), b * kDegree);
  }
  return {a, b};
}

void encode(std::complex<double> z, TouchstoneFormat format, std::string& out) {
  double a = z.real(), b = z.imag();
  if (format != TouchstoneFormat::RI) {
    const double mag = std::abs(z);
    b = std::arg(z) / kDegree;
    a = format == TouchstoneFormat::MA ? mag : 20.0 * std::log10(mag);
  }
  out += ' ';
  out += format_scientific(a);
  out += ' ';
  out += format_scientific(b);
}

}  // namespace

std::string to_string(FrequencyUnit unit) {
  switch (unit) {
    case FrequencyUnit::Hz: return "Hz";
    case FrequencyUnit::kHz: return "kHz";
    case FrequencyUnit::MHz: return "MHz";
    case FrequencyUnit::GHz: return "GHz";
  }
  return "Hz";
}

std::string to_string(TouchstoneFormat format) {
  switch (format) {
    case TouchstoneFormat::RI: return "RI";
    case TouchstoneFormat::MA: return "MA";
    case TouchstoneFormat::DB: return "DB";
  }
  return "RI";
}

TouchstoneFormat touchstone_format_from_string(const std::string& text) {
  const std::string t = upper(text);
  if (t == "RI") return TouchstoneFormat::RI;
  if (t == "MA") return TouchstoneFormat::MA;
  if (t == "DB") return TouchstoneFormat::DB;
  throw Error(ErrorCategory::usage, "unknown touchstone format '" + text + "' (RI, MA or DB)");
}

double unit_scale(FrequencyUnit unit) {
  switch (unit) {
    case FrequencyUnit::Hz: return 1.0;
    case FrequencyUnit::kHz: return 1e3;
    case FrequencyUnit::MHz: return 1e6;
    case FrequencyUnit::GHz: return 1e9;
  }
  return 1.0;
}

TouchstoneDocument parse_touchstone(std::string_view text, std::optional<int> ports) {
  if (ports && *ports != 1 && *ports != 2) throw Error(ErrorCategory::domain, "touchstone reader supports 1 or 2 ports");
  TouchstoneDocument doc;
  bool have_option = false;
  std::size_t arity = ports ? (*ports == 1 ? 3 : 9) : 0;
  const auto all = lines(text);
  for (std::size_t n = 0; n < all.size(); ++n) {
    const std::size_t line = n + 1;
    std::string_view body = all[n];
    if (const auto bang = body.find('!'); bang != std::string_view::npos) {
      doc.comments.emplace_back(trim(body.substr(bang + 1)));
      body = body.substr(0, bang);
    }
    body = trim(body);
    if (body.empty()) continue;
    if (body.front() == '#') {
      if (!doc.rows.empty()) fail(line, "option line after data");
      if (!have_option) doc.option = parse_option_line(body.substr(1), line);
      have_option = true;  // later option lines are ignored, as v1 prescribes
      continue;
    }
    if (body.front() == '[') fail(line, "Touchstone v2 keywords are not supported");
    TouchstoneRow row;
    row.line = line;
    for (auto tok : split_whitespace(body)) row.values.push_back(parse_number(tok, "number", line));
    if (arity == 0) {
      if (row.values.size() != 3 && row.values.size() != 9)
        fail(line, "row has " + std::to_string(row.values.size()) + " columns; expected 3 (1-port) or 9 (2-port)");
      arity = row.values.size();
    } else if (row.values.size() != arity) {
      fail(line, "row has " + std::to_string(row.values.size()) + " columns; expected " + std::to_string(arity));
    }
    if (!doc.rows.empty() && !(row.values[0] > doc.rows.back().values[0]))
      fail(line, "frequency is not strictly increasing");
    doc.rows.push_back(std::move(row));
  }
  if (doc.rows.empty()) throw Error(ErrorCategory::parse, "touchstone data contains no rows");
  return doc;
}

SParameterSet to_sparameters(const TouchstoneDocument& doc) {
  SParameterSet set;
  set.reference_impedance = doc.option.reference_resistance;
  set.ports = doc.rows.front().values.size() == 3 ? 1 : 2;
  const double scale = unit_scale(doc.option.unit);
  for (const auto& row : doc.rows) {
    const auto& v = row.values;
    const double f = v[0] * scale;
    if (!(f > 0.0)) fail(row.line, "frequency must be positive");
    set.grid.push_back(f);
    SMatrix s = SMatrix::Zero();
    s(0, 0) = decode(v[1], v[2], doc.option.format);
    if (set.ports == 2) {
      // v1 two-port column order: S11 S21 S12 S22.
      s(1, 0) = decode(v[3], v[4], doc.option.format);
      s(0, 1) = decode(v[5], v[6], doc.option.format);
      s(1, 1) = decode(v[7], v[8], doc.option.format);
    }
    set.data.push_back(s);
  }
  set.validate();
  return set;
}

SParameterSet read_touchstone(std::string_view text, std::optional<int> ports) {
  return to_sparameters(parse_touchstone(text, ports));
}

std::string write_touchstone(const SParameterSet& set, TouchstoneFormat format, FrequencyUnit unit) {
  set.validate();
  std::string out;
  out.reserve(set.size() * (set.ports == 1 ? 80 : 220) + 128);
  out += "! mbaw ";
  out += set.ports == 1 ? "one-port" : "two-port";
  out += " S-parameters\n# ";
  out += to_string(unit);
  out += " S ";
  out += to_string(format);
  out += " R ";
  out += format_number(set.reference_impedance);
  out += '\n';
  const double scale = unit_scale(unit);
  for (std::size_t i = 0; i < set.size(); ++i) {
    out += format_scientific(set.grid[i] / scale);
    const auto& s = set.data[i];
    encode(s(0, 0), format, out);
    if (set.ports == 2) {
      encode(s(1, 0), format, out);
      encode(s(0, 1), format, out);
      encode(s(1, 1), format, out);
    }
    out += '\n';
  }
  return out;
}

namespace {

std::optional<int> ports_from_extension(const std::filesystem::path& path) {
  const std::string ext = upper(path.extension().string());
  if (ext == ".S1P") return 1;
  if (ext == ".S2P") return 2;
  return std::nullopt;
}

}  // namespace

SParameterSet read_touchstone_file(const std::filesystem::path& path) {
  return read_touchstone(read_file(path), ports_from_extension(path));
}

void write_touchstone_file(const std::filesystem::path& path, const SParameterSet& set, TouchstoneFormat format,
                           FrequencyUnit unit) {
  if (const auto p = ports_from_extension(path); p && *p != set.ports)
    throw Error(ErrorCategory::usage, "file extension of '" + path.string() + "' does not match the port count");
  write_file(path, write_touchstone(set, format, unit));
}

}  // namespace mbaw::io
