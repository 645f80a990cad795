#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mbaw/dispersion.hpp"
#include "mbaw/network.hpp"
#include "mbaw/resonator.hpp"

namespace mbaw {

/// IDT geometry behind one resonator.
struct GeometrySpec {
  double lambda = 0.0;      // acoustic wavelength, m
  int pairs_n = 100;        // finger pairs
  double aperture_w = 0.0;  // m
  double eps_eff = 5e-10;   // F/m per pair
  double q_assumed = 1000.0;

  void validate() const;
  friend bool operator==(const GeometrySpec&, const GeometrySpec&) = default;
};

/// Behavioral spur knobs. Magnitudes and offsets are calibration
/// parameters, not physics.
struct TransverseSpurs {
  bool enabled = false;
  std::vector<int> orders{3, 5, 7};
  std::vector<double> relative_coupling{0.5, 0.5, 0.5};
  std::vector<double> relative_offset{0.012, 0.03, 0.055};
  bool piston = false;
  double piston_factor = 0.03;

  friend bool operator==(const TransverseSpurs&, const TransverseSpurs&) = default;
};

struct LeakySpur {
  bool enabled = false;
  double pr_over_pi = 1.0;  // reflector pitch / IDT pitch
  double relative_coupling = 0.05;
  /// Offset of the branch above fr. Unset places it 2 % above fa.
  std::optional<double> relative_offset;

  friend bool operator==(const LeakySpur&, const LeakySpur&) = default;
};

struct OvertoneSpur {
  bool enabled = false;
  bool embedded_idt = false;
  double relative_coupling = 0.1;
  double frequency_factor = 1.5;  // overtone at factor * fr; a guess, not measured

  friend bool operator==(const OvertoneSpur&, const OvertoneSpur&) = default;
};

struct SpurEnvironment {
  TransverseSpurs transverse;
  LeakySpur leaky;
  OvertoneSpur overtone;

  void validate() const;
  friend bool operator==(const SpurEnvironment&, const SpurEnvironment&) = default;
};

struct DesignSpec {
  double fc_target = 0.0;  // Hz
  double fbw_target = 0.0;
  double il_max_db = 2.1;
  int stage_count = 4;
  double q_assumed = 1500.0;
  double reference_impedance = 50.0;

  void validate() const;
  friend bool operator==(const DesignSpec&, const DesignSpec&) = default;
};

/// c0 = pairs_n * eps_eff * aperture_w.
double static_capacitance(const GeometrySpec& geom);

/// Reflector-pitch gain on the leaky branch: 0 at or below 0.9, 1 at or
/// above 1.0, linear in between.
double leak_gain(double pr_over_pi);

std::vector<MotionalBranch> spur_branches(const MotionalBranch& main, double c0, const SpurEnvironment& spurs);

/// Smallest motional capacitance accepted before the model is called degenerate.
inline constexpr double kMinMotionalCapacitance = 1e-18;

ResonatorModel derive_resonator(const DispersionTable& table, const PlatformConstants& consts, const GeometrySpec& geom,
                                const SpurEnvironment& spurs = {});

/// fa/fr of the table at the wavelength that resonates at f.
double resonance_ratio_at(const DispersionTable& table, const PlatformConstants& consts, double f);

/// Throws Error{feasibility} unless fbw_target <= 1.2 (fa/fr - 1) at fc_target.
void check_feasible(const DesignSpec& spec, const DispersionTable& table, const PlatformConstants& consts);

struct SynthesisOptions {
  double weight_fc = 10.0;
  double weight_fbw = 10.0;
  double weight_il = 1.0;
  int max_evaluations = 2000;
  double diameter_tolerance = 1e-6;
  int restarts = 3;
  std::uint64_t seed = 20211020;
  std::size_t grid_points = 1201;
  int pairs_n = 100;
  double eps_eff = 5e-10;
  SpurEnvironment spurs;
  double mode_threshold = kDefaultModeThreshold;
};

struct SynthesisResult {
  LadderTopology topology;
  AcousticMode mode = AcousticMode::SH0;
  GeometrySpec series_geometry;
  GeometrySpec shunt_geometry;
  FilterMetrics achieved;
  std::vector<double> grid;  // evaluation grid used by the cost
  FrequencyWindow passband_hint;
  double cost = 0.0;
  int evaluations = 0;
  bool converged = false;    // last simplex run met the diameter criterion
  bool targets_met = false;  // fc within 1 %, fbw within 10 %, IL within ceiling
};

/// Evaluation grid and passband hint used while optimizing `spec`.
std::vector<double> synthesis_grid(const DesignSpec& spec, std::size_t points);
FrequencyWindow synthesis_hint(const DesignSpec& spec);

SynthesisResult ladder_synthesize(const DesignSpec& spec, const DispersionTable& table, const PlatformConstants& consts,
                                  const SynthesisOptions& options = {});

/// Picks the SH0 or S0 table by target frequency.
struct TableSet {
  const DispersionTable* sh0 = nullptr;
  const DispersionTable* s0 = nullptr;
};

SynthesisResult ladder_synthesize(const DesignSpec& spec, const TableSet& tables, const PlatformConstants& consts,
                                  const SynthesisOptions& options = {});

struct BandPreset {
  std::string label;
  DesignSpec spec;
  bool anchored = false;  // true: endpoint taken from reported device data; false: placeholder
  std::optional<double> bw3db;
  std::string note;
};

std::vector<BandPreset> band_presets();

}  // namespace mbaw
