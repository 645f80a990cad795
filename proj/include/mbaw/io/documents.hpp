#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mbaw/dispersion.hpp"
#include "mbaw/io/keyvalue.hpp"
#include "mbaw/network.hpp"
#include "mbaw/synth.hpp"

namespace mbaw::io {

inline constexpr int kDocumentVersion = 1;

// Each structured file is a KeyValueDocument with `spec_version = 1`.
// Writers emit every field with round-trip precision so reading back
// reproduces the value exactly.

KeyValueDocument topology_document(const LadderTopology& topology);
LadderTopology topology_from(const KeyValueDocument& doc);

KeyValueDocument design_spec_document(const DesignSpec& spec);
DesignSpec design_spec_from(const KeyValueDocument& doc);

KeyValueDocument geometry_document(const GeometrySpec& geom);
GeometrySpec geometry_from(const KeyValueDocument& doc);

KeyValueDocument spur_document(const SpurEnvironment& spurs);
SpurEnvironment spurs_from(const KeyValueDocument& doc);

enum class GridSpacing { linear, log };

struct GridSpec {
  double start = 0.0;
  double stop = 0.0;
  std::size_t points = 2001;
  GridSpacing spacing = GridSpacing::linear;

  void validate() const;
};

std::vector<double> make_grid(const GridSpec& spec);

/// Defaults shared by several CLI subcommands.
struct RunConfig {
  std::optional<std::filesystem::path> sh0_table;
  std::optional<std::filesystem::path> s0_table;
  PlatformConstants constants;
  std::optional<std::filesystem::path> spurs;
  std::vector<std::filesystem::path> design_specs;
  std::filesystem::path output_dir = ".";
  std::optional<GridSpec> grid;
};

KeyValueDocument run_config_document(const RunConfig& config);
/// Relative paths resolve against `base_dir` (the config file's directory).
RunConfig run_config_from(const KeyValueDocument& doc, const std::filesystem::path& base_dir = {});

KeyValueDocument load_document(const std::filesystem::path& path);
void save_document(const std::filesystem::path& path, const KeyValueDocument& doc);

}  // namespace mbaw::io
