#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "mbaw/dispersion.hpp"
#include "mbaw/extraction.hpp"

namespace mbaw::io {

// Dispersion table CSV:
//
//   # mode: S0
//   # any other comment line is kept as provenance
//   h_over_lambda,vp_mps,k2
//   0.10,6780,0.120
//
// The `# mode:` comment may be replaced by passing `mode` explicitly.
DispersionTable read_dispersion_csv(std::string_view text, std::optional<AcousticMode> mode = {});
std::string write_dispersion_csv(const DispersionTable& table);
DispersionTable read_dispersion_file(const std::filesystem::path& path, std::optional<AcousticMode> mode = {});

// Delay-line CSV with header `gap_wavelengths,s21_mag`; an optional
// `# damping: <value>` comment records the material damping of the source.
DelayLineDataset read_delay_line_csv(std::string_view text);
std::string write_delay_line_csv(const DelayLineDataset& dataset);

}  // namespace mbaw::io
