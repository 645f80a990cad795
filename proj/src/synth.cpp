#include "mbaw/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "mbaw/simplex.hpp"

namespace mbaw {

namespace {

constexpr double kPi = std::numbers::pi;

// Penalties for designs the cost pipeline cannot evaluate.
constexpr double kOutOfTablePenalty = 1e6;
constexpr double kNoPassbandPenalty = 1e4;

MotionalBranch branch_at(double f, double cm, double q, BranchLabel label) {
  MotionalBranch b;
  b.cm = cm;
  b.lm = 1.0 / ((2.0 * kPi * f) * (2.0 * kPi * f) * cm);
  b.rm = std::isfinite(q) ? std::sqrt(b.lm / b.cm) / q : 0.0;
  b.label = label;
  return b;
}

}  // namespace

void GeometrySpec::validate() const {
  if (!(lambda > 0.0) || pairs_n < 1 || !(aperture_w > 0.0) || !(eps_eff > 0.0) || !(q_assumed > 0.0))
    throw Error(ErrorCategory::domain, "geometry requires positive lambda, aperture, eps_eff, q and pairs_n >= 1");
}

void SpurEnvironment::validate() const {
  const auto& t = transverse;
  if (t.orders.size() != t.relative_coupling.size() || t.orders.size() != t.relative_offset.size())
    throw Error(ErrorCategory::domain, "transverse orders, couplings and offsets must have equal length");
  for (std::size_t i = 0; i < t.orders.size(); ++i) {
    if (t.orders[i] < 1 || t.orders[i] % 2 == 0)
      throw Error(ErrorCategory::domain, "transverse orders must be odd and positive");
    if (!(t.relative_coupling[i] >= 0.0 && t.relative_coupling[i] <= 1.0))
      throw Error(ErrorCategory::domain, "transverse couplings must lie in [0, 1]");
    if (!(t.relative_offset[i] > 0.0)) throw Error(ErrorCategory::domain, "transverse offsets must be positive");
  }
  if (!(t.piston_factor >= 0.0 && t.piston_factor <= 1.0))
    throw Error(ErrorCategory::domain, "piston factor must lie in [0, 1]");
  if (!(leaky.pr_over_pi > 0.5 && leaky.pr_over_pi <= 1.2))
    throw Error(ErrorCategory::domain, "reflector pitch ratio must lie in (0.5, 1.2]");
  if (!(leaky.relative_coupling >= 0.0 && leaky.relative_coupling <= 1.0))
    throw Error(ErrorCategory::domain, "leaky coupling must lie in [0, 1]");
  if (leaky.relative_offset && !(*leaky.relative_offset > 0.0))
    throw Error(ErrorCategory::domain, "leaky offset must be positive");
  if (!(overtone.relative_coupling >= 0.0 && overtone.relative_coupling <= 1.0))
    throw Error(ErrorCategory::domain, "overtone coupling must lie in [0, 1]");
  if (!(overtone.frequency_factor > 1.0)) throw Error(ErrorCategory::domain, "overtone frequency factor must exceed 1");
}

void DesignSpec::validate() const {
  if (!(fc_target > 0.0)) throw Error(ErrorCategory::domain, "design fc_target must be positive");
  if (!(fbw_target > 0.0 && fbw_target < 0.2)) throw Error(ErrorCategory::domain, "design fbw_target must lie in (0, 0.2)");
  if (stage_count < 2 || stage_count % 2 != 0)
    throw Error(ErrorCategory::domain, "design stage_count must be an even integer >= 2");
  if (!(il_max_db > 0.0) || !(q_assumed > 0.0) || !(reference_impedance > 0.0))
    throw Error(ErrorCategory::domain, "design il_max_db, q_assumed and reference_impedance must be positive");
}

double static_capacitance(const GeometrySpec& geom) {
  geom.validate();
  return static_cast<double>(geom.pairs_n) * geom.eps_eff * geom.aperture_w;
}

double leak_gain(double pr_over_pi) {
  // Endpoints exact: (1.0 - 0.9) / 0.1 rounds just below 1.
  if (pr_over_pi <= 0.9) return 0.0;
  if (pr_over_pi >= 1.0) return 1.0;
  return (pr_over_pi - 0.9) / 0.1;
}

std::vector<MotionalBranch> spur_branches(const MotionalBranch& main, double c0, const SpurEnvironment& spurs) {
  spurs.validate();
  main.validate();
  const double fr = main.resonance();
  const double q = main.rm > 0.0 ? std::sqrt(main.lm / main.cm) / main.rm : std::numeric_limits<double>::infinity();
  std::vector<MotionalBranch> out;

  if (spurs.transverse.enabled) {
    const auto& t = spurs.transverse;
    for (std::size_t i = 0; i < t.orders.size(); ++i) {
      const int m = t.orders[i];
      double scale = t.relative_coupling[i] / static_cast<double>(m * m);
      if (t.piston) scale *= t.piston_factor;
      if (scale <= 0.0) continue;
      out.push_back(branch_at(fr * (1.0 + t.relative_offset[i]), main.cm * scale, q, {BranchKind::transverse, m}));
    }
  }
  if (spurs.leaky.enabled) {
    const double fa_ratio = std::sqrt(1.0 + main.cm / c0);
    const double offset = spurs.leaky.relative_offset.value_or(1.02 * fa_ratio - 1.0);
    if (!(1.0 + offset > fa_ratio))
      throw Error(ErrorCategory::domain, "leaky branch must sit above the anti-resonance");
    const double scale = spurs.leaky.relative_coupling * leak_gain(spurs.leaky.pr_over_pi);
    if (scale > 0.0) out.push_back(branch_at(fr * (1.0 + offset), main.cm * scale, q, {BranchKind::leaky, 0}));
  }
  if (spurs.overtone.enabled && !spurs.overtone.embedded_idt && spurs.overtone.relative_coupling > 0.0) {
    out.push_back(branch_at(fr * spurs.overtone.frequency_factor, main.cm * spurs.overtone.relative_coupling, q,
                            {BranchKind::overtone, 1}));
  }
  return out;
}

ResonatorModel derive_resonator(const DispersionTable& table, const PlatformConstants& consts, const GeometrySpec& geom,
                                const SpurEnvironment& spurs) {
  geom.validate();
  const double fr = frequency_for(table, consts, geom.lambda);
  const double k2 = table.at(consts.film_thickness_h / geom.lambda).k2;
  const double c0 = static_capacitance(geom);
  const double cm = c0 * capacitance_ratio_from_coupling(k2);
  if (!(cm >= kMinMotionalCapacitance)) {
    std::ostringstream os;
    os << "motional capacitance " << cm << " F below the degeneracy floor " << kMinMotionalCapacitance << " F";
    throw Error(ErrorCategory::degeneracy, os.str());
  }
  ResonatorModel m;
  m.c0 = c0;
  m.main = branch_at(fr, cm, geom.q_assumed, {BranchKind::main, 0});
  m.spurs = spur_branches(m.main, c0, spurs);
  m.validate();
  return m;
}

double resonance_ratio_at(const DispersionTable& table, const PlatformConstants& consts, double f) {
  const double lambda = wavelength_for_frequency(table, consts, f);
  const double k2 = table.at(consts.film_thickness_h / lambda).k2;
  return std::sqrt(1.0 + capacitance_ratio_from_coupling(k2));
}

void check_feasible(const DesignSpec& spec, const DispersionTable& table, const PlatformConstants& consts) {
  spec.validate();
  const double ratio = resonance_ratio_at(table, consts, spec.fc_target);
  const double bound = 1.2 * (ratio - 1.0);
  if (spec.fbw_target > bound) {
    std::ostringstream os;
    os << "fbw_target " << spec.fbw_target << " exceeds the coupling-limited bound " << bound << " (1.2 (fa/fr - 1) at "
       << spec.fc_target << " Hz, fa/fr=" << ratio << ")";
    throw Error(ErrorCategory::feasibility, os.str());
  }
}

std::vector<double> synthesis_grid(const DesignSpec& spec, std::size_t points) {
  const double span = std::max(2.5 * spec.fbw_target, 0.05);
  return linear_grid(spec.fc_target * (1.0 - span), spec.fc_target * (1.0 + span), points);
}

FrequencyWindow synthesis_hint(const DesignSpec& spec) {
  return {spec.fc_target * (1.0 - spec.fbw_target), spec.fc_target * (1.0 + spec.fbw_target)};
}

namespace {

struct LadderDesign {
  double lambda_series, lambda_shunt, c0_series, c0_shunt;
};

Eigen::VectorXd to_vector(const LadderDesign& d) {
  Eigen::VectorXd x(4);
  x << std::log(d.lambda_series), std::log(d.lambda_shunt), std::log(d.c0_series), std::log(d.c0_shunt);
  return x;
}

LadderDesign from_vector(const Eigen::VectorXd& x) {
  return {std::exp(x[0]), std::exp(x[1]), std::exp(x[2]), std::exp(x[3])};
}

GeometrySpec geometry_for(double lambda, double c0, const DesignSpec& spec, const SynthesisOptions& options) {
  GeometrySpec g;
  g.lambda = lambda;
  g.pairs_n = options.pairs_n;
  g.eps_eff = options.eps_eff;
  g.aperture_w = c0 / (static_cast<double>(options.pairs_n) * options.eps_eff);
  g.q_assumed = spec.q_assumed;
  return g;
}

LadderTopology build_ladder(const LadderDesign& d, const DesignSpec& spec, const DispersionTable& table,
                            const PlatformConstants& consts, const SynthesisOptions& options) {
  const auto series = derive_resonator(table, consts, geometry_for(d.lambda_series, d.c0_series, spec, options), options.spurs);
  const auto shunt = derive_resonator(table, consts, geometry_for(d.lambda_shunt, d.c0_shunt, spec, options), options.spurs);
  LadderTopology t;
  t.reference_impedance = spec.reference_impedance;
  for (int i = 0; i < spec.stage_count; ++i)
    t.stages.push_back(i % 2 == 0 ? LadderStage{Placement::series, series} : LadderStage{Placement::shunt, shunt});
  return t;
}

double design_cost(const FilterMetrics& m, const DesignSpec& spec, const SynthesisOptions& options) {
  const double efc = (m.fc - spec.fc_target) / spec.fc_target;
  const double efbw = (m.fbw - spec.fbw_target) / spec.fbw_target;
  const double excess = std::max(0.0, m.il_db - spec.il_max_db);
  return options.weight_fc * efc * efc + options.weight_fbw * efbw * efbw + options.weight_il * excess * excess;
}

bool meets_targets(const FilterMetrics& m, const DesignSpec& spec) {
  return std::abs(m.fc - spec.fc_target) / spec.fc_target < 0.01 &&
         std::abs(m.fbw - spec.fbw_target) / spec.fbw_target < 0.10 && m.il_db <= spec.il_max_db;
}

LadderDesign initial_design(const DesignSpec& spec, const DispersionTable& table, const PlatformConstants& consts) {
  // Series fr below fc so that fc sits midway between series fr and fa;
  // shunt detuned so its fa lands on the series fr.
  const double ratio_c = resonance_ratio_at(table, consts, spec.fc_target);
  const double fr_series = spec.fc_target / (1.0 + 0.5 * (ratio_c - 1.0));
  const double lambda_series = wavelength_for_frequency(table, consts, fr_series);
  double fr_shunt = fr_series / ratio_c;
  for (int i = 0; i < 3; ++i) fr_shunt = fr_series / resonance_ratio_at(table, consts, fr_shunt);
  const double lambda_shunt = wavelength_for_frequency(table, consts, fr_shunt);
  const double c0 = 1.0 / (2.0 * kPi * spec.fc_target * spec.reference_impedance);
  return {lambda_series, lambda_shunt, c0, c0};
}

std::vector<Eigen::VectorXd> simplex_around(const Eigen::VectorXd& x, const Eigen::VectorXd& steps) {
  std::vector<Eigen::VectorXd> s{x};
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Eigen::VectorXd v = x;
    v[i] += steps[i];
    s.push_back(v);
  }
  return s;
}

}  // namespace

SynthesisResult ladder_synthesize(const DesignSpec& spec, const DispersionTable& table, const PlatformConstants& consts,
                                  const SynthesisOptions& options) {
  check_feasible(spec, table, consts);

  SynthesisResult result;
  result.mode = table.mode();
  result.grid = synthesis_grid(spec, options.grid_points);
  result.passband_hint = synthesis_hint(spec);
  MetricsOptions metrics_options;
  metrics_options.passband_hint = result.passband_hint;

  auto cost = [&](const Eigen::VectorXd& x) {
    LadderTopology topology;
    try {
      topology = build_ladder(from_vector(x), spec, table, consts, options);
    } catch (const Error&) {
      return kOutOfTablePenalty;
    }
    try {
      return design_cost(filter_metrics(cascade_sweep(topology, result.grid), metrics_options), spec, options);
    } catch (const Error&) {
      return kNoPassbandPenalty;
    }
  };

  // Steps in log space: frequencies move ~ lambda, so keep them a fraction
  // of the target bandwidth; c0 mostly sets matching.
  Eigen::VectorXd steps(4);
  const double lambda_step = std::max(0.25 * spec.fbw_target, 0.002);
  steps << lambda_step, lambda_step, 0.2, 0.2;

  SimplexOptions simplex_options;
  simplex_options.max_evaluations = options.max_evaluations;
  simplex_options.diameter_tolerance = options.diameter_tolerance;

  auto best = nelder_mead(cost, simplex_around(to_vector(initial_design(spec, table, consts)), steps), simplex_options);
  int evaluations = best.evaluations;
  bool converged = best.converged;

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> jitter(-1.0, 1.0);
  for (int r = 0; r < options.restarts; ++r) {
    Eigen::VectorXd jittered_steps = steps;
    Eigen::VectorXd start = best.x;
    for (Eigen::Index i = 0; i < steps.size(); ++i) {
      jittered_steps[i] = steps[i] * (0.5 + 0.5 * std::abs(jitter(rng)));
      start[i] += 0.1 * steps[i] * jitter(rng);
    }
    auto run = nelder_mead(cost, simplex_around(start, jittered_steps), simplex_options);
    evaluations += run.evaluations;
    if (run.value < best.value) {
      best = run;
      converged = run.converged;
    }
  }

  const LadderDesign design = from_vector(best.x);
  result.topology = build_ladder(design, spec, table, consts, options);
  result.series_geometry = geometry_for(design.lambda_series, design.c0_series, spec, options);
  result.shunt_geometry = geometry_for(design.lambda_shunt, design.c0_shunt, spec, options);
  result.cost = best.value;
  result.evaluations = evaluations;
  result.converged = converged;
  try {
    result.achieved = filter_metrics(cascade_sweep(result.topology, result.grid), metrics_options);
    result.targets_met = meets_targets(result.achieved, spec);
  } catch (const Error&) {
    result.targets_met = false;
  }
  return result;
}

SynthesisResult ladder_synthesize(const DesignSpec& spec, const TableSet& tables, const PlatformConstants& consts,
                                  const SynthesisOptions& options) {
  spec.validate();
  const AcousticMode mode = select_mode(spec.fc_target, options.mode_threshold);
  const DispersionTable* table = mode == AcousticMode::SH0 ? tables.sh0 : tables.s0;
  if (!table) throw Error(ErrorCategory::precondition, "no " + to_string(mode) + " dispersion table supplied");
  return ladder_synthesize(spec, *table, consts, options);
}

std::vector<BandPreset> band_presets() {
  constexpr int kCount = 8;
  constexpr double kFcLow = 1.4e9, kFcHigh = 6.0e9;
  constexpr double kFbwLow = 0.033;
  constexpr double kWidestBand = 488e6;
  const double fbw_high = kWidestBand / kFcHigh;

  std::vector<BandPreset> presets;
  for (int i = 0; i < kCount; ++i) {
    const double t = static_cast<double>(i) / (kCount - 1);
    BandPreset p;
    p.label = "F" + std::to_string(i + 1);
    p.spec.fc_target = kFcLow + t * (kFcHigh - kFcLow);
    p.spec.fbw_target = kFbwLow + t * (fbw_high - kFbwLow);
    p.spec.il_max_db = 2.10;
    p.spec.stage_count = 4;
    p.spec.q_assumed = 1500.0;
    p.spec.reference_impedance = 50.0;
    if (i == 0) {
      p.anchored = true;
      p.note = "lowest reported center frequency (1.4 GHz) with the narrowest reported FBW (3.3%)";
    } else if (i == kCount - 1) {
      p.anchored = true;
      p.bw3db = kWidestBand;
      p.note = "highest reported center frequency (6.0 GHz) carrying the widest reported 3-dB bandwidth (488 MHz)";
    } else {
      p.note = "placeholder: evenly spaced between the reported endpoints, not a measured band";
    }
    presets.push_back(p);
  }
  presets.front().spec.fc_target = kFcLow;
  presets.back().spec.fc_target = kFcHigh;
  presets.back().spec.fbw_target = fbw_high;
  return presets;
}

}  // namespace mbaw
