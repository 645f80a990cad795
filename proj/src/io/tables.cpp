#include "mbaw/io/tables.hpp"

#include <sstream>

#include "mbaw/io/text.hpp"

namespace mbaw::io {

namespace {

struct CsvBody {
  std::vector<std::string> comments;
  std::vector<std::pair<std::size_t, std::vector<std::string_view>>> rows;  // (line, cells)
};

CsvBody parse_csv(std::string_view text, std::string_view header, std::size_t columns) {
  CsvBody body;
  bool have_header = false;
  const auto all = lines(text);
  for (std::size_t n = 0; n < all.size(); ++n) {
    const std::size_t line = n + 1;
    const auto l = trim(all[n]);
    if (l.empty()) continue;
    if (l.front() == '#') {
      body.comments.emplace_back(trim(l.substr(1)));
      continue;
    }
    if (!have_header) {
      std::string joined;
      for (auto cell : split(l, ',')) {
        if (!joined.empty()) joined += ',';
        joined += cell;
      }
      if (joined != header) {
        std::ostringstream os;
        os << "line " << line << ": expected header '" << header << "', got '" << l << "'";
        throw Error(ErrorCategory::parse, os.str());
      }
      have_header = true;
      continue;
    }
    auto cells = split(l, ',');
    if (cells.size() != columns) {
      std::ostringstream os;
      os << "line " << line << ": expected " << columns << " columns, got " << cells.size();
      throw Error(ErrorCategory::parse, os.str());
    }
    body.rows.emplace_back(line, std::move(cells));
  }
  if (!have_header) throw Error(ErrorCategory::parse, "missing header '" + std::string(header) + "'");
  return body;
}

// "key: value" inside a comment; empty when the comment is not of that shape.
std::optional<std::string> comment_value(const std::string& comment, std::string_view key) {
  if (comment.size() <= key.size() || comment.compare(0, key.size(), key) != 0 || comment[key.size()] != ':')
    return std::nullopt;
  return std::string(trim(std::string_view(comment).substr(key.size() + 1)));
}

}  // namespace

DispersionTable read_dispersion_csv(std::string_view text, std::optional<AcousticMode> mode) {
  const auto body = parse_csv(text, "h_over_lambda,vp_mps,k2", 3);
  std::string provenance;
  for (const auto& c : body.comments) {
    if (auto m = comment_value(c, "mode")) {
      if (!mode) mode = acoustic_mode_from_string(*m);
      continue;
    }
    if (!provenance.empty()) provenance += '\n';
    provenance += c;
  }
  if (!mode) throw Error(ErrorCategory::parse, "dispersion table does not declare its mode ('# mode: SH0|S0')");
  std::vector<DispersionSample> samples;
  for (const auto& [line, cells] : body.rows) {
    samples.push_back({parse_number(cells[0], "h_over_lambda", line), parse_number(cells[1], "vp_mps", line),
                       parse_number(cells[2], "k2", line)});
  }
  return DispersionTable(*mode, std::move(samples), provenance);
}

std::string write_dispersion_csv(const DispersionTable& table) {
  std::string out = "# mode: " + to_string(table.mode()) + "\n";
  for (auto line : lines(table.provenance())) {
    out += "# ";
    out += line;
    out += '\n';
  }
  out += "h_over_lambda,vp_mps,k2\n";
  for (const auto& s : table.samples())
    out += format_number(s.h_over_lambda) + "," + format_number(s.vp) + "," + format_number(s.k2) + "\n";
  return out;
}

DispersionTable read_dispersion_file(const std::filesystem::path& path, std::optional<AcousticMode> mode) {
  return read_dispersion_csv(read_file(path), mode);
}

DelayLineDataset read_delay_line_csv(std::string_view text) {
  const auto body = parse_csv(text, "gap_wavelengths,s21_mag", 2);
  DelayLineDataset ds;
  for (const auto& c : body.comments)
    if (auto v = comment_value(c, "damping")) ds.damping_input = parse_number(*v, "damping");
  for (const auto& [line, cells] : body.rows)
    ds.runs.push_back({parse_number(cells[0], "gap_wavelengths", line), parse_number(cells[1], "s21_mag", line)});
  return ds;
}

std::string write_delay_line_csv(const DelayLineDataset& dataset) {
  std::string out;
  if (dataset.damping_input) out += "# damping: " + format_number(*dataset.damping_input) + "\n";
  out += "gap_wavelengths,s21_mag\n";
  for (const auto& r : dataset.runs) out += format_number(r.gap_wavelengths) + "," + format_number(r.s21_magnitude) + "\n";
  return out;
}

}  // namespace mbaw::io
