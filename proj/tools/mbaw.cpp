// mbaw: command-line front end for the resonator/filter toolkit.
//
// Every subcommand prints a `key = value` report on stdout. Failures print a
// single line `<category>: <detail>` on stderr and exit 1; command-line
// misuse exits 2 with category `usage`.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "mbaw/dispersion.hpp"
#include "mbaw/extraction.hpp"
#include "mbaw/io/documents.hpp"
#include "mbaw/io/keyvalue.hpp"
#include "mbaw/io/tables.hpp"
#include "mbaw/io/text.hpp"
#include "mbaw/io/touchstone.hpp"
#include "mbaw/network.hpp"
#include "mbaw/resonator.hpp"
#include "mbaw/synth.hpp"

namespace fs = std::filesystem;
using namespace mbaw;

namespace {

struct Common {
  std::string config;
  std::string out;
  std::vector<double> grid;  // start stop points
  bool log_grid = false;
};

struct Context {
  io::RunConfig config;
  fs::path out_dir = ".";
  std::optional<io::GridSpec> grid;
};

Context load_context(const Common& c) {
  Context ctx;
  if (!c.config.empty()) {
    const fs::path path(c.config);
    ctx.config = io::run_config_from(io::load_document(path), path.parent_path());
    ctx.out_dir = ctx.config.output_dir;
    ctx.grid = ctx.config.grid;
  }
  if (!c.out.empty()) ctx.out_dir = c.out;
  if (!c.grid.empty()) {
    if (c.grid[2] < 2.0 || c.grid[2] != std::floor(c.grid[2]))
      throw Error(ErrorCategory::usage, "--grid POINTS must be an integer >= 2");
    io::GridSpec g;
    g.start = c.grid[0];
    g.stop = c.grid[1];
    g.points = static_cast<std::size_t>(c.grid[2]);
    g.spacing = c.log_grid ? io::GridSpacing::log : io::GridSpacing::linear;
    ctx.grid = g;
  } else if (c.log_grid && ctx.grid) {
    ctx.grid->spacing = io::GridSpacing::log;
  }
  return ctx;
}

std::vector<double> grid_or(const Context& ctx, double start, double stop, bool log_spacing = false) {
  if (ctx.grid) return io::make_grid(*ctx.grid);
  io::GridSpec g;
  g.start = start;
  g.stop = stop;
  g.spacing = log_spacing ? io::GridSpacing::log : io::GridSpacing::linear;
  return io::make_grid(g);
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "run configuration file");
  sub->add_option("--out", c.out, "output directory");
  sub->add_option("--grid", c.grid, "frequency grid: START STOP POINTS (Hz)")->expected(3);
  sub->add_flag("--log", c.log_grid, "logarithmic grid spacing");
}

// Tables given on the command line win; otherwise the config supplies them.
std::vector<DispersionTable> load_tables(const std::vector<std::string>& paths, const io::RunConfig& config) {
  std::vector<DispersionTable> tables;
  for (const auto& p : paths) tables.push_back(io::read_dispersion_file(p));
  if (tables.empty()) {
    if (config.sh0_table) tables.push_back(io::read_dispersion_file(*config.sh0_table, AcousticMode::SH0));
    if (config.s0_table) tables.push_back(io::read_dispersion_file(*config.s0_table, AcousticMode::S0));
  }
  if (tables.empty()) throw Error(ErrorCategory::usage, "no dispersion table given (--table or table.* in --config)");
  for (const auto& t : tables) t.check_against(config.constants);
  return tables;
}

const DispersionTable* find_table(const std::vector<DispersionTable>& tables, AcousticMode mode) {
  for (const auto& t : tables)
    if (t.mode() == mode) return &t;
  return nullptr;
}

void emit(const io::KeyValueDocument& report, const std::optional<fs::path>& file = {}) {
  const auto text = report.serialize();
  std::cout << text;
  if (file) io::write_file(*file, text);
}

void put_metrics(io::KeyValueDocument& r, const FilterMetrics& m, const std::string& prefix = "") {
  r.set(prefix + "fc_hz", m.fc);
  r.set(prefix + "il_db", m.il_db);
  r.set(prefix + "bw3db_hz", m.bw3db);
  r.set(prefix + "fbw", m.fbw);
  r.set(prefix + "f_lower_hz", m.f_lower);
  r.set(prefix + "f_upper_hz", m.f_upper);
}

void put_model(io::KeyValueDocument& r, const ResonatorModel& m) {
  r.set("c0_f", m.c0);
  r.set("r0_ohm", m.r0);
  r.set("rs_ohm", m.rs);
  r.set("rm_ohm", m.main.rm);
  r.set("lm_h", m.main.lm);
  r.set("cm_f", m.main.cm);
  const auto rf = resonance_frequencies(m);
  r.set("fr_hz", rf.fr);
  r.set("fa_hz", rf.fa);
  r.set("k2", coupling_from_frequencies(rf.fr, rf.fa));
  const auto q = quality_factor(m);
  r.set("q", q.bounded() ? io::format_number(q.value()) : std::string("unbounded"));
}

std::optional<FrequencyWindow> band_from(const std::vector<double>& band) {
  if (band.empty()) return std::nullopt;
  if (!(band[0] > 0.0 && band[0] < band[1])) throw Error(ErrorCategory::usage, "--band needs 0 < LO < HI");
  return FrequencyWindow{band[0], band[1]};
}

// ---------------------------------------------------------------------------

struct DispersionArgs {
  std::vector<std::string> tables;
  double lambda = 0.0;
};

int run_dispersion(const Common& common, const DispersionArgs& a) {
  const auto ctx = load_context(common);
  const auto tables = load_tables(a.tables, ctx.config);
  const auto& consts = ctx.config.constants;
  io::KeyValueDocument r;
  r.set("lambda_m", a.lambda);
  r.set("h_over_lambda", consts.film_thickness_h / a.lambda);
  r.set("regime", to_string(classify_regime(consts, a.lambda)));
  for (const auto& t : tables) {
    const std::string p = tables.size() > 1 ? to_string(t.mode()) + "." : "";
    const auto pt = interpolate(t, consts.film_thickness_h / a.lambda);
    r.set(p + "mode", to_string(t.mode()));
    r.set(p + "f_hz", frequency_for(t, consts, a.lambda));
    r.set(p + "vp_mps", pt.vp);
    r.set(p + "k2", pt.k2);
  }
  emit(r);
  return 0;
}

struct ResonatorArgs {
  std::vector<std::string> tables;
  std::string geom;
  std::string spurs;
  std::string name = "resonator";
};

int run_resonator(const Common& common, const ResonatorArgs& a) {
  const auto ctx = load_context(common);
  const auto tables = load_tables(a.tables, ctx.config);
  if (tables.size() != 1) throw Error(ErrorCategory::usage, "resonator takes exactly one --table");
  const auto geom = io::geometry_from(io::load_document(a.geom));
  SpurEnvironment spurs;
  if (!a.spurs.empty()) spurs = io::spurs_from(io::load_document(a.spurs));
  else if (ctx.config.spurs) spurs = io::spurs_from(io::load_document(*ctx.config.spurs));

  const auto model = derive_resonator(tables.front(), ctx.config.constants, geom, spurs);
  const auto rf = resonance_frequencies(model);
  const auto grid = grid_or(ctx, 0.9 * rf.fr, 1.1 * rf.fa);
  const auto s1p = ctx.out_dir / (a.name + ".s1p");
  io::write_touchstone_file(s1p, one_port_sweep(model, grid));

  io::KeyValueDocument r;
  r.set("mode", to_string(tables.front().mode()));
  put_model(r, model);
  r.set("spur_count", static_cast<int>(model.spurs.size()));
  r.set("touchstone", s1p.string());
  emit(r, ctx.out_dir / (a.name + "_report.txt"));
  return 0;
}

struct FilterArgs {
  std::string topology;
  std::vector<double> band;
  std::string name = "filter";
};

int run_filter(const Common& common, const FilterArgs& a) {
  const auto ctx = load_context(common);
  const auto topology = io::topology_from(io::load_document(a.topology));
  double lo = 0.0, hi = 0.0;
  for (const auto& st : topology.stages) {
    const auto rf = resonance_frequencies(st.resonator);
    lo = lo == 0.0 ? rf.fr : std::min(lo, rf.fr);
    hi = std::max(hi, rf.fa);
  }
  const auto grid = grid_or(ctx, 0.9 * lo, 1.1 * hi);
  const auto sp = cascade_sweep(topology, grid);
  const auto s2p = ctx.out_dir / (a.name + ".s2p");
  io::write_touchstone_file(s2p, sp);

  MetricsOptions mo;
  mo.passband_hint = band_from(a.band);
  io::KeyValueDocument r;
  put_metrics(r, filter_metrics(sp, mo));
  r.set("stage_count", static_cast<int>(topology.stages.size()));
  r.set("touchstone", s2p.string());
  emit(r, ctx.out_dir / (a.name + "_report.txt"));
  return 0;
}

struct SynthArgs {
  std::string spec;
  std::string preset;
  std::vector<std::string> tables;
  std::string name = "synth";
};

int run_synth(const Common& common, const SynthArgs& a) {
  const auto ctx = load_context(common);
  if (a.spec.empty() == a.preset.empty()) throw Error(ErrorCategory::usage, "synth needs exactly one of --spec or --preset");
  DesignSpec spec;
  if (!a.spec.empty()) {
    spec = io::design_spec_from(io::load_document(a.spec));
  } else {
    bool found = false;
    for (const auto& p : band_presets())
      if (p.label == a.preset) {
        spec = p.spec;
        found = true;
      }
    if (!found) throw Error(ErrorCategory::usage, "unknown preset '" + a.preset + "' (F1..F8)");
  }
  const auto tables = load_tables(a.tables, ctx.config);
  SynthesisOptions options;
  if (ctx.config.spurs) options.spurs = io::spurs_from(io::load_document(*ctx.config.spurs));
  const TableSet set{find_table(tables, AcousticMode::SH0), find_table(tables, AcousticMode::S0)};
  const auto result = ladder_synthesize(spec, set, ctx.config.constants, options);

  const auto topo_path = ctx.out_dir / (a.name + "_topology.txt");
  io::save_document(topo_path, io::topology_document(result.topology));
  const auto s2p = ctx.out_dir / (a.name + ".s2p");
  io::write_touchstone_file(s2p, cascade_sweep(result.topology, grid_or(ctx, result.grid.front(), result.grid.back())));

  io::KeyValueDocument r;
  r.set("mode", to_string(result.mode));
  r.set("target.fc_hz", spec.fc_target);
  r.set("target.fbw", spec.fbw_target);
  r.set("target.il_max_db", spec.il_max_db);
  put_metrics(r, result.achieved, "achieved.");
  r.set("error.fc_relative", (result.achieved.fc - spec.fc_target) / spec.fc_target);
  r.set("error.fbw_relative", (result.achieved.fbw - spec.fbw_target) / spec.fbw_target);
  r.set("series.lambda_m", result.series_geometry.lambda);
  r.set("series.aperture_m", result.series_geometry.aperture_w);
  r.set("shunt.lambda_m", result.shunt_geometry.lambda);
  r.set("shunt.aperture_m", result.shunt_geometry.aperture_w);
  r.set("cost", result.cost);
  r.set("evaluations", result.evaluations);
  r.set("converged", result.converged);
  r.set("targets_met", result.targets_met);
  r.set("topology", topo_path.string());
  r.set("touchstone", s2p.string());
  emit(r, ctx.out_dir / (a.name + "_report.txt"));
  return 0;
}

struct AnalyzeArgs {
  std::string snp;
  bool one_port = false;
  bool two_port = false;
  std::vector<double> band;
  std::string csv;
};

int run_analyze(const Common& common, const AnalyzeArgs& a) {
  const auto ctx = load_context(common);
  if (a.one_port && a.two_port) throw Error(ErrorCategory::usage, "--one-port and --two-port are exclusive");
  auto set = io::read_touchstone_file(a.snp);
  const int ports = a.one_port ? 1 : a.two_port ? 2 : set.ports;
  if (ports != set.ports)
    throw Error(ErrorCategory::usage, "file holds a " + std::to_string(set.ports) + "-port network");

  io::KeyValueDocument r;
  if (ports == 2) {
    MetricsOptions mo;
    mo.passband_hint = band_from(a.band);
    put_metrics(r, filter_metrics(set, mo));
    emit(r);
    return 0;
  }

  const auto sweep = admittance_from_s11(set);
  BodeQOptions qo;
  qo.qmax_window = band_from(a.band);
  if (!qo.qmax_window) qo.qmax_window = resonance_window(sweep);
  const auto curve = bode_q(set, qo);

  const fs::path csv = a.csv.empty() ? ctx.out_dir / (fs::path(a.snp).stem().string() + "_bode_q.csv") : fs::path(a.csv);
  std::string text = "frequency_hz,bode_q\n";
  for (std::size_t i = 0; i < curve.grid.size(); ++i)
    text += io::format_number(curve.grid[i]) + "," +
            (curve.q[i].bounded() ? io::format_number(curve.q[i].value()) : std::string("inf")) + "\n";
  io::write_file(csv, text);

  r.set("qmax", curve.qmax);
  r.set("f_at_qmax_hz", curve.f_at_qmax);
  r.set("qmax_window_lo_hz", qo.qmax_window->lo);
  r.set("qmax_window_hi_hz", qo.qmax_window->hi);
  try {
    const auto rf = extract_fr_fa(sweep);
    const double k2 = coupling_from_frequencies(rf.fr, rf.fa);
    r.set("fr_hz", rf.fr);
    r.set("fa_hz", rf.fa);
    r.set("k2", k2);
    r.set("fom", figure_of_merit(k2, curve.qmax));
  } catch (const Error& e) {
    // A sweep that only brackets fr still yields a Q curve.
    if (e.category() != ErrorCategory::bracketing && e.category() != ErrorCategory::domain) throw;
  }
  r.set("bode_q_csv", csv.string());
  emit(r);
  return 0;
}

int run_fit(const Common& common, const std::string& snp) {
  (void)load_context(common);
  const auto report = fit_mbvd(io::read_touchstone_file(snp));
  io::KeyValueDocument r;
  put_model(r, report.model);
  r.set("residual", report.residual);
  r.set("iterations", report.iterations);
  r.set("converged", report.converged);
  emit(r);
  return 0;
}

int run_fitloss(const Common& common, const std::string& csv) {
  (void)load_context(common);
  const auto ds = io::read_delay_line_csv(io::read_file(csv));
  const auto fit = fit_delay_line(ds);
  io::KeyValueDocument r;
  r.set("delta", fit.delta);
  r.set("amplitude", fit.amplitude);
  r.set("runs", static_cast<int>(ds.runs.size()));
  if (ds.damping_input) r.set("damping_input", *ds.damping_input);
  emit(r);
  return 0;
}

int run_presets() {
  io::KeyValueDocument r;
  for (const auto& p : band_presets()) {
    const std::string k = p.label + ".";
    r.set(k + "fc_hz", p.spec.fc_target);
    r.set(k + "fbw", p.spec.fbw_target);
    r.set(k + "il_max_db", p.spec.il_max_db);
    r.set(k + "stage_count", p.spec.stage_count);
    r.set(k + "q_assumed", p.spec.q_assumed);
    r.set(k + "anchored", p.anchored);
    if (p.bw3db) r.set(k + "bw3db_hz", *p.bw3db);
  }
  emit(r);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mbaw: acoustic resonator and ladder filter toolkit"};
  app.require_subcommand(1);
  Common common;

  DispersionArgs dispersion_args;
  auto* dispersion = app.add_subcommand("dispersion", "frequency, vp, k2 and regime for a wavelength");
  add_common(dispersion, common);
  dispersion->add_option("--table", dispersion_args.tables, "dispersion table CSV (repeatable)");
  dispersion->add_option("--lambda", dispersion_args.lambda, "acoustic wavelength (m)")->required();

  ResonatorArgs resonator_args;
  auto* resonator = app.add_subcommand("resonator", "derive an mBVD model from geometry and sweep it");
  add_common(resonator, common);
  resonator->add_option("--table", resonator_args.tables, "dispersion table CSV");
  resonator->add_option("--geom", resonator_args.geom, "geometry file")->required();
  resonator->add_option("--spurs", resonator_args.spurs, "spur environment file");
  resonator->add_option("--name", resonator_args.name, "output file stem");

  FilterArgs filter_args;
  auto* filter = app.add_subcommand("filter", "sweep a ladder topology");
  add_common(filter, common);
  filter->add_option("--topology", filter_args.topology, "topology file")->required();
  filter->add_option("--band", filter_args.band, "passband hint LO HI (Hz)")->expected(2);
  filter->add_option("--name", filter_args.name, "output file stem");

  SynthArgs synth_args;
  auto* synth = app.add_subcommand("synth", "synthesize a ladder filter to a band target");
  add_common(synth, common);
  synth->add_option("--spec", synth_args.spec, "design spec file");
  synth->add_option("--preset", synth_args.preset, "band preset label F1..F8");
  synth->add_option("--table", synth_args.tables, "dispersion table CSV (repeatable)");
  synth->add_option("--name", synth_args.name, "output file stem");

  AnalyzeArgs analyze_args;
  auto* analyze = app.add_subcommand("analyze", "Bode-Q of a one-port or metrics of a two-port");
  add_common(analyze, common);
  analyze->add_option("--sNp", analyze_args.snp, "Touchstone file")->required();
  analyze->add_flag("--one-port", analyze_args.one_port, "expect a one-port file");
  analyze->add_flag("--two-port", analyze_args.two_port, "expect a two-port file");
  analyze->add_option("--band", analyze_args.band, "qmax window or passband hint LO HI (Hz)")->expected(2);
  analyze->add_option("--csv", analyze_args.csv, "Bode-Q curve output path");

  std::string fit_snp;
  auto* fit = app.add_subcommand("fit", "fit an mBVD model to one-port data");
  add_common(fit, common);
  fit->add_option("--sNp", fit_snp, "one-port Touchstone file")->required();

  std::string fitloss_csv;
  auto* fitloss = app.add_subcommand("fitloss", "loss factor from delay-line data");
  add_common(fitloss, common);
  fitloss->add_option("--csv", fitloss_csv, "delay-line CSV")->required();

  auto* presets = app.add_subcommand("presets", "list the F1..F8 band presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*dispersion) return run_dispersion(common, dispersion_args);
    if (*resonator) return run_resonator(common, resonator_args);
    if (*filter) return run_filter(common, filter_args);
    if (*synth) return run_synth(common, synth_args);
    if (*analyze) return run_analyze(common, analyze_args);
    if (*fit) return run_fit(common, fit_snp);
    if (*fitloss) return run_fitloss(common, fitloss_csv);
    if (*presets) return run_presets();
  } catch (const Error& e) {
    std::cerr << category_name(e.category()) << ": " << e.what() << "\n";
    return e.category() == ErrorCategory::usage ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "io: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
