#include "mbaw/io/documents.hpp"

#include "mbaw/io/text.hpp"

namespace mbaw::io {

namespace {

std::string join_numbers(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + format_number(v[i]);
  return out;
}

std::string join_ints(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out;
}

void put_branch(KeyValueDocument& doc, const std::string& prefix, const MotionalBranch& b) {
  doc.set(prefix + ".rm", b.rm);
  doc.set(prefix + ".lm", b.lm);
  doc.set(prefix + ".cm", b.cm);
}

MotionalBranch get_branch(const KeyValueDocument& doc, const std::string& prefix) {
  MotionalBranch b;
  b.rm = doc.get_double(prefix + ".rm");
  b.lm = doc.get_double(prefix + ".lm");
  b.cm = doc.get_double(prefix + ".cm");
  return b;
}

}  // namespace

KeyValueDocument topology_document(const LadderTopology& topology) {
  topology.validate();
  KeyValueDocument doc;
  doc.add_comment("mbaw ladder topology");
  doc.set("spec_version", kDocumentVersion);
  doc.set("reference_impedance", topology.reference_impedance);
  doc.set("stage_count", static_cast<int>(topology.stages.size()));
  for (std::size_t i = 0; i < topology.stages.size(); ++i) {
    const auto& st = topology.stages[i];
    const std::string p = "stage." + std::to_string(i);
    doc.set(p + ".placement", to_string(st.placement));
    doc.set(p + ".c0", st.resonator.c0);
    doc.set(p + ".r0", st.resonator.r0);
    doc.set(p + ".rs", st.resonator.rs);
    put_branch(doc, p + ".main", st.resonator.main);
    doc.set(p + ".spur_count", static_cast<int>(st.resonator.spurs.size()));
    for (std::size_t j = 0; j < st.resonator.spurs.size(); ++j) {
      const auto& sp = st.resonator.spurs[j];
      const std::string q = p + ".spur." + std::to_string(j);
      doc.set(q + ".kind", to_string(sp.label.kind));
      doc.set(q + ".order", sp.label.order);
      put_branch(doc, q, sp);
    }
  }
  return doc;
}

LadderTopology topology_from(const KeyValueDocument& doc) {
  doc.require_version(kDocumentVersion, "topology");
  LadderTopology t;
  t.reference_impedance = doc.get_double("reference_impedance", 50.0);
  const int n = doc.get_int("stage_count");
  if (n < 1) throw Error(ErrorCategory::parse, "topology stage_count must be >= 1");
  for (int i = 0; i < n; ++i) {
    const std::string p = "stage." + std::to_string(i);
    LadderStage st;
    st.placement = placement_from_string(doc.get_string(p + ".placement"));
    st.resonator.c0 = doc.get_double(p + ".c0");
    st.resonator.r0 = doc.get_double(p + ".r0", 0.0);
    st.resonator.rs = doc.get_double(p + ".rs", 0.0);
    st.resonator.main = get_branch(doc, p + ".main");
    const int spurs = doc.get_int(p + ".spur_count", 0);
    for (int j = 0; j < spurs; ++j) {
      const std::string q = p + ".spur." + std::to_string(j);
      MotionalBranch b = get_branch(doc, q);
      b.label = {branch_kind_from_string(doc.get_string(q + ".kind")), doc.get_int(q + ".order", 0)};
      st.resonator.spurs.push_back(b);
    }
    t.stages.push_back(std::move(st));
  }
  t.validate();
  return t;
}

KeyValueDocument design_spec_document(const DesignSpec& spec) {
  KeyValueDocument doc;
  doc.add_comment("mbaw design spec");
  doc.set("spec_version", kDocumentVersion);
  doc.set("fc_target", spec.fc_target);
  doc.set("fbw_target", spec.fbw_target);
  doc.set("il_max_db", spec.il_max_db);
  doc.set("stage_count", spec.stage_count);
  doc.set("q_assumed", spec.q_assumed);
  doc.set("reference_impedance", spec.reference_impedance);
  return doc;
}

DesignSpec design_spec_from(const KeyValueDocument& doc) {
  doc.require_version(kDocumentVersion, "design spec");
  DesignSpec s;
  s.fc_target = doc.get_double("fc_target");
  s.fbw_target = doc.get_double("fbw_target");
  s.il_max_db = doc.get_double("il_max_db", s.il_max_db);
  s.stage_count = doc.get_int("stage_count", s.stage_count);
  s.q_assumed = doc.get_double("q_assumed", s.q_assumed);
  s.reference_impedance = doc.get_double("reference_impedance", s.reference_impedance);
  s.validate();
  return s;
}

KeyValueDocument geometry_document(const GeometrySpec& geom) {
  KeyValueDocument doc;
  doc.add_comment("mbaw IDT geometry");
  doc.set("spec_version", kDocumentVersion);
  doc.set("lambda", geom.lambda);
  doc.set("pairs_n", geom.pairs_n);
  doc.set("aperture_w", geom.aperture_w);
  doc.set("eps_eff", geom.eps_eff);
  doc.set("q_assumed", geom.q_assumed);
  return doc;
}

GeometrySpec geometry_from(const KeyValueDocument& doc) {
  doc.require_version(kDocumentVersion, "geometry");
  GeometrySpec g;
  g.lambda = doc.get_double("lambda");
  g.pairs_n = doc.get_int("pairs_n", g.pairs_n);
  g.aperture_w = doc.get_double("aperture_w");
  g.eps_eff = doc.get_double("eps_eff", g.eps_eff);
  g.q_assumed = doc.get_double("q_assumed", g.q_assumed);
  g.validate();
  return g;
}

KeyValueDocument spur_document(const SpurEnvironment& spurs) {
  KeyValueDocument doc;
  doc.add_comment("mbaw spur environment");
  doc.set("spec_version", kDocumentVersion);
  const auto& t = spurs.transverse;
  doc.set("transverse.enabled", t.enabled);
  doc.set("transverse.orders", join_ints(t.orders));
  doc.set("transverse.relative_coupling", join_numbers(t.relative_coupling));
  doc.set("transverse.relative_offset", join_numbers(t.relative_offset));
  doc.set("transverse.piston", t.piston);
  doc.set("transverse.piston_factor", t.piston_factor);
  doc.set("leaky.enabled", spurs.leaky.enabled);
  doc.set("leaky.pr_over_pi", spurs.leaky.pr_over_pi);
  doc.set("leaky.relative_coupling", spurs.leaky.relative_coupling);
  if (spurs.leaky.relative_offset) doc.set("leaky.relative_offset", *spurs.leaky.relative_offset);
  doc.set("overtone.enabled", spurs.overtone.enabled);
  doc.set("overtone.embedded_idt", spurs.overtone.embedded_idt);
  doc.set("overtone.relative_coupling", spurs.overtone.relative_coupling);
  doc.set("overtone.frequency_factor", spurs.overtone.frequency_factor);
  return doc;
}

SpurEnvironment spurs_from(const KeyValueDocument& doc) {
  doc.require_version(kDocumentVersion, "spur environment");
  SpurEnvironment s;
  auto& t = s.transverse;
  t.enabled = doc.get_bool("transverse.enabled", t.enabled);
  if (doc.contains("transverse.orders")) t.orders = doc.get_ints("transverse.orders");
  if (doc.contains("transverse.relative_coupling")) t.relative_coupling = doc.get_doubles("transverse.relative_coupling");
  if (doc.contains("transverse.relative_offset")) t.relative_offset = doc.get_doubles("transverse.relative_offset");
  t.piston = doc.get_bool("transverse.piston", t.piston);
  t.piston_factor = doc.get_double("transverse.piston_factor", t.piston_factor);
  s.leaky.enabled = doc.get_bool("leaky.enabled", s.leaky.enabled);
  s.leaky.pr_over_pi = doc.get_double("leaky.pr_over_pi", s.leaky.pr_over_pi);
  s.leaky.relative_coupling = doc.get_double("leaky.relative_coupling", s.leaky.relative_coupling);
  if (doc.contains("leaky.relative_offset")) s.leaky.relative_offset = doc.get_double("leaky.relative_offset");
  s.overtone.enabled = doc.get_bool("overtone.enabled", s.overtone.enabled);
  s.overtone.embedded_idt = doc.get_bool("overtone.embedded_idt", s.overtone.embedded_idt);
  s.overtone.relative_coupling = doc.get_double("overtone.relative_coupling", s.overtone.relative_coupling);
  s.overtone.frequency_factor = doc.get_double("overtone.frequency_factor", s.overtone.frequency_factor);
  s.validate();
  return s;
}

void GridSpec::validate() const {
  if (!(start > 0.0) || !(start < stop)) throw Error(ErrorCategory::domain, "grid needs 0 < start < stop");
  if (points < 2) throw Error(ErrorCategory::domain, "grid needs at least 2 points");
}

std::vector<double> make_grid(const GridSpec& spec) {
  spec.validate();
  return spec.spacing == GridSpacing::linear ? linear_grid(spec.start, spec.stop, spec.points)
                                             : log_grid(spec.start, spec.stop, spec.points);
}

KeyValueDocument run_config_document(const RunConfig& c) {
  KeyValueDocument doc;
  doc.add_comment("mbaw run configuration");
  doc.set("spec_version", kDocumentVersion);
  if (c.sh0_table) doc.set("table.sh0", c.sh0_table->string());
  if (c.s0_table) doc.set("table.s0", c.s0_table->string());
  doc.set("platform.film_thickness_h", c.constants.film_thickness_h);
  doc.set("platform.electrode_thickness", c.constants.electrode_thickness);
  doc.set("platform.v_ssb", c.constants.v_ssb);
  if (c.spurs) doc.set("spurs", c.spurs->string());
  if (!c.design_specs.empty()) {
    std::string joined;
    for (std::size_t i = 0; i < c.design_specs.size(); ++i) joined += (i ? "," : "") + c.design_specs[i].string();
    doc.set("designs", joined);
  }
  doc.set("output_dir", c.output_dir.string());
  if (c.grid) {
    doc.set("grid.start", c.grid->start);
    doc.set("grid.stop", c.grid->stop);
    doc.set("grid.points", static_cast<int>(c.grid->points));
    doc.set("grid.spacing", std::string(c.grid->spacing == GridSpacing::linear ? "linear" : "log"));
  }
  return doc;
}

RunConfig run_config_from(const KeyValueDocument& doc, const std::filesystem::path& base_dir) {
  doc.require_version(kDocumentVersion, "run config");
  auto resolve = [&](const std::string& p) {
    std::filesystem::path path(p);
    return path.is_relative() && !base_dir.empty() ? base_dir / path : path;
  };
  RunConfig c;
  if (auto v = doc.find("table.sh0")) c.sh0_table = resolve(*v);
  if (auto v = doc.find("table.s0")) c.s0_table = resolve(*v);
  c.constants.film_thickness_h = doc.get_double("platform.film_thickness_h", c.constants.film_thickness_h);
  c.constants.electrode_thickness = doc.get_double("platform.electrode_thickness", c.constants.electrode_thickness);
  c.constants.v_ssb = doc.get_double("platform.v_ssb", c.constants.v_ssb);
  c.constants.validate();
  if (auto v = doc.find("spurs")) c.spurs = resolve(*v);
  if (auto v = doc.find("designs"))
    for (auto p : split(*v, ','))
      if (!p.empty()) c.design_specs.push_back(resolve(std::string(p)));
  if (auto v = doc.find("output_dir")) c.output_dir = resolve(*v);
  if (doc.contains("grid.start") || doc.contains("grid.stop")) {
    GridSpec g;
    g.start = doc.get_double("grid.start");
    g.stop = doc.get_double("grid.stop");
    const int points = doc.get_int("grid.points", 2001);
    if (points < 2) throw Error(ErrorCategory::parse, "grid.points must be >= 2");
    g.points = static_cast<std::size_t>(points);
    const auto spacing = doc.get_string("grid.spacing", "linear");
    if (spacing == "linear") g.spacing = GridSpacing::linear;
    else if (spacing == "log") g.spacing = GridSpacing::log;
    else throw Error(ErrorCategory::parse, "grid.spacing must be linear or log");
    g.validate();
    c.grid = g;
  }
  return c;
}

KeyValueDocument load_document(const std::filesystem::path& path) { return KeyValueDocument::parse(read_file(path)); }

void save_document(const std::filesystem::path& path, const KeyValueDocument& doc) { write_file(path, doc.serialize()); }

}  // namespace mbaw::io
