#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "mbaw/io/documents.hpp"
#include "mbaw/io/keyvalue.hpp"
#include "mbaw/io/tables.hpp"
#include "mbaw/io/text.hpp"
#include "mbaw/io/touchstone.hpp"
#include "support.hpp"

using namespace mbaw;
using mbaw::testing::category_of;
using mbaw::testing::data_path;
using C = std::complex<double>;

namespace {

std::string parse_error(std::string_view text) {
  try {
    (void)io::read_touchstone(text);
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::parse);
    return e.what();
  }
  FAIL("expected a parse error");
  return {};
}

SParameterSet random_two_port(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  SParameterSet s;
  s.ports = 2;
  s.grid = linear_grid(1e9, 3e9, n);
  for (std::size_t i = 0; i < n; ++i) {
    SMatrix m;
    m << C(u(rng), u(rng)), C(u(rng), u(rng)), C(u(rng), u(rng)), C(u(rng), u(rng));
    m(0, 1) = m(1, 0);
    s.data.push_back(m);
  }
  return s;
}

double max_rel_error(const SParameterSet& a, const SParameterSet& b) {
  REQUIRE(a.size() == b.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(a.grid[i] - b.grid[i]) / a.grid[i]);
    for (int r = 0; r < a.ports; ++r)
      for (int c = 0; c < a.ports; ++c) {
        const C x = a.data[i](r, c), y = b.data[i](r, c);
        worst = std::max(worst, std::abs(x - y) / std::max(std::abs(x), 1e-300));
      }
  }
  return worst;
}

ResonatorModel sample_model() {
  return make_resonator(1.0e-12, {0.25, 100e-9, 0.12e-12, {}},
                        {{3.0, 98e-9, 0.004e-12, {BranchKind::transverse, 3}}, {2.0, 70e-9, 0.01e-12, {BranchKind::leaky, 0}}},
                        0.1, 0.3);
}

}  // namespace

TEST_CASE("touchstone formats") {
  const auto ri = io::read_touchstone("# GHz S RI R 50\n1.0 0.0 0.0\n");
  REQUIRE(ri.size() == 1);
  CHECK(ri.ports == 1);
  CHECK(ri.grid[0] == 1e9);
  CHECK(ri.s11(0) == C(0.0, 0.0));

  const auto ma = io::read_touchstone("# GHz S MA R 50\n1.0 1.0 90\n");
  CHECK(std::abs(ma.s11(0) - C(0.0, 1.0)) < 1e-15);

  const auto db = io::read_touchstone("# GHz S DB R 50\n1.0 -6.0206 0\n");
  CHECK(db.s11(0).real() == doctest::Approx(0.5).epsilon(1e-5));
  CHECK(db.s11(0).imag() == 0.0);

  const auto mhz = io::read_touchstone("! comment\n# MHz S RI R 75\n100 0.1 0.2 ! trailing\n200 0.3 0.4\n");
  CHECK(mhz.reference_impedance == 75.0);
  CHECK(mhz.grid[1] == 200e6);

  // Defaults: GHz S MA R 50.
  const auto dflt = io::read_touchstone("# \n2 0.5 0\n");
  CHECK(dflt.grid[0] == 2e9);
  CHECK(dflt.s11(0) == C(0.5, 0.0));

  // Two-port column order S11 S21 S12 S22.
  const auto two = io::read_touchstone("# Hz S RI R 50\n10 1 0 2 0 3 0 4 0\n");
  CHECK(two.ports == 2);
  CHECK(two.data[0](0, 0) == C(1, 0));
  CHECK(two.data[0](1, 0) == C(2, 0));
  CHECK(two.data[0](0, 1) == C(3, 0));
  CHECK(two.data[0](1, 1) == C(4, 0));
}

TEST_CASE("touchstone parse errors carry line numbers") {
  CHECK(parse_error("# GHz S RI R 50\n1.0 0 0\n1.0 0 0\n").find("line 3") != std::string::npos);
  CHECK(parse_error("# GHz S RI R 50\n1.0 0 0\n2.0 0 0 0\n").find("line 3") != std::string::npos);
  CHECK(parse_error("# GHz Y RI R 50\n1.0 0 0\n").find("line 1") != std::string::npos);
  CHECK(parse_error("# GHz S XY R 50\n1.0 0 0\n").find("line 1") != std::string::npos);
  CHECK(parse_error("# GHz S RI R\n1.0 0 0\n").find("line 1") != std::string::npos);
  CHECK(parse_error("# GHz S RI R 50\n1.0 zero 0\n").find("line 2") != std::string::npos);
  CHECK(parse_error("[Version] 2.0\n# GHz S RI R 50\n1.0 0 0\n").find("line 1") != std::string::npos);
  CHECK(category_of([] { (void)io::read_touchstone("# GHz S RI R 50\n"); }) == ErrorCategory::parse);
  CHECK(category_of([] { (void)io::read_touchstone("# GHz S RI R 50\n1 0 0\n", 2); }) == ErrorCategory::parse);
}

TEST_CASE("touchstone round trip") {
  const auto set = random_two_port(1001, 3);
  for (auto fmt : {io::TouchstoneFormat::RI, io::TouchstoneFormat::MA, io::TouchstoneFormat::DB}) {
    const auto text = io::write_touchstone(set, fmt);
    CHECK(max_rel_error(set, io::read_touchstone(text)) < 1e-12);
    CHECK(io::write_touchstone(set, fmt) == text);
  }
  // RI -> MA -> RI
  const auto ma = io::read_touchstone(io::write_touchstone(set, io::TouchstoneFormat::MA));
  CHECK(max_rel_error(set, io::read_touchstone(io::write_touchstone(ma, io::TouchstoneFormat::RI))) < 1e-12);

  const auto one = one_port_sweep(sample_model(), linear_grid(1.3e9, 1.7e9, 401));
  CHECK(max_rel_error(one, io::read_touchstone(io::write_touchstone(one, io::TouchstoneFormat::RI, io::FrequencyUnit::Hz))) <
        1e-12);

  SParameterSet empty;
  empty.ports = 1;
  CHECK_THROWS_AS((void)io::write_touchstone(empty), Error);
}

TEST_CASE("touchstone number formatting") {
  SParameterSet s;
  s.ports = 1;
  s.grid = {1.5e9};
  SMatrix m = SMatrix::Zero();
  m(0, 0) = C(0.1, -2.5e-7);
  s.data = {m};
  const auto text = io::write_touchstone(s);
  CHECK(text.find("1.5000000000000000e+00 1.0000000000000001e-01 -2.4999999999999999e-07") != std::string::npos);
  CHECK(text.find("# GHz S RI R 50") != std::string::npos);
  CHECK(text.find('E') == std::string::npos);
}

TEST_CASE("touchstone files pick the port count from the extension") {
  const auto dir = std::filesystem::temp_directory_path() / "mbaw_test_io";
  std::filesystem::remove_all(dir);
  const auto set = random_two_port(11, 9);
  io::write_touchstone_file(dir / "x.s2p", set);
  CHECK(max_rel_error(set, io::read_touchstone_file(dir / "x.s2p")) < 1e-12);
  io::write_file(dir / "bad.s1p", io::write_touchstone(set));
  CHECK(category_of([&] { (void)io::read_touchstone_file(dir / "bad.s1p"); }) == ErrorCategory::parse);
  CHECK(category_of([&] { (void)io::read_touchstone_file(dir / "missing.s2p"); }) == ErrorCategory::io);
  std::filesystem::remove_all(dir);
}

TEST_CASE("key-value documents") {
  const auto doc = io::KeyValueDocument::parse("# header\nspec_version = 1\n a = 1.5 \nflag = true\nlist = 1, 2,3\n\n");
  CHECK(doc.get_double("a") == 1.5);
  CHECK(doc.get_bool("flag"));
  CHECK(doc.get_ints("list") == std::vector<int>{1, 2, 3});
  CHECK(doc.get_double("missing", 7.0) == 7.0);
  CHECK_NOTHROW(doc.require_version(1, "test"));
  CHECK(category_of([&] { doc.require_version(2, "test"); }) == ErrorCategory::parse);
  CHECK(category_of([&] { (void)doc.get_double("missing"); }) == ErrorCategory::parse);
  CHECK(category_of([&] { (void)doc.get_int("a"); }) == ErrorCategory::parse);
  CHECK(category_of([] { (void)io::KeyValueDocument::parse("a = 1\na = 2\n"); }) == ErrorCategory::parse);
  CHECK(category_of([] { (void)io::KeyValueDocument::parse("no equals sign\n"); }) == ErrorCategory::parse);
  CHECK(category_of([] { io::KeyValueDocument::parse("a = 1\n").require_version(1, "x"); }) == ErrorCategory::parse);
}

TEST_CASE("numbers round-trip through text") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-30.0, 30.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = std::pow(10.0, u(rng)) * (i % 2 ? -1.0 : 1.0);
    CHECK(io::parse_number(io::format_number(x), "x") == x);
    CHECK(io::parse_number(io::format_scientific(x), "x") == doctest::Approx(x).epsilon(1e-16));
  }
  CHECK(io::parse_number("+2.5", "x") == 2.5);
  CHECK(category_of([] { (void)io::parse_number("2.5x", "x"); }) == ErrorCategory::parse);
  CHECK(category_of([] { (void)io::parse_number("", "x"); }) == ErrorCategory::parse);
}

TEST_CASE("topology round trip") {
  LadderTopology t;
  t.reference_impedance = 75.0;
  t.stages = {{Placement::series, sample_model()}, {Placement::shunt, make_resonator(2e-12, {0.5, 120e-9, 0.2e-12, {}})}};
  const auto text = io::topology_document(t).serialize();
  const auto back = io::topology_from(io::KeyValueDocument::parse(text));
  CHECK(back == t);
  CHECK(io::topology_document(back).serialize() == text);
  CHECK(category_of([] { (void)io::topology_from(io::KeyValueDocument::parse("spec_version = 1\nstage_count = 0\n")); }) ==
        ErrorCategory::parse);
}

TEST_CASE("design spec, geometry and spur files round trip") {
  const DesignSpec spec{2.7e9, 0.0468, 2.1, 6, 1500, 50};
  CHECK(io::design_spec_from(io::KeyValueDocument::parse(io::design_spec_document(spec).serialize())) == spec);

  GeometrySpec g;
  g.lambda = 1.5e-6;
  g.aperture_w = 20e-6;
  g.q_assumed = 3680;
  CHECK(io::geometry_from(io::KeyValueDocument::parse(io::geometry_document(g).serialize())) == g);

  SpurEnvironment env;
  env.transverse.enabled = true;
  env.transverse.piston = true;
  env.leaky.enabled = true;
  env.leaky.pr_over_pi = 0.95;
  env.leaky.relative_offset = 0.1;
  env.overtone.enabled = true;
  env.overtone.embedded_idt = true;
  CHECK(io::spurs_from(io::KeyValueDocument::parse(io::spur_document(env).serialize())) == env);

  // Missing optional keys fall back to defaults.
  const auto minimal = io::design_spec_from(io::KeyValueDocument::parse("spec_version = 1\nfc_target = 1e9\nfbw_target = 0.05\n"));
  CHECK(minimal.stage_count == 4);
  CHECK(category_of([] { (void)io::design_spec_from(io::KeyValueDocument::parse("fc_target = 1e9\nfbw_target = 0.05\n")); }) ==
        ErrorCategory::parse);
}

TEST_CASE("run configuration") {
  const auto doc = io::KeyValueDocument::parse(
      "spec_version = 1\ntable.sh0 = sh0.csv\ntable.s0 = /abs/s0.csv\nplatform.v_ssb = 7000\n"
      "designs = a.txt,b.txt\noutput_dir = out\ngrid.start = 1e9\ngrid.stop = 2e9\ngrid.points = 11\ngrid.spacing = log\n");
  const auto c = io::run_config_from(doc, "/base");
  CHECK(*c.sh0_table == std::filesystem::path("/base/sh0.csv"));
  CHECK(*c.s0_table == std::filesystem::path("/abs/s0.csv"));
  CHECK(c.constants.v_ssb == 7000.0);
  CHECK(c.constants.film_thickness_h == 450e-9);
  CHECK(c.design_specs.size() == 2);
  CHECK(c.output_dir == std::filesystem::path("/base/out"));
  REQUIRE(c.grid);
  const auto grid = io::make_grid(*c.grid);
  CHECK(grid.size() == 11);
  CHECK(grid[5] == doctest::Approx(std::sqrt(2.0) * 1e9).epsilon(1e-12));

  const auto again = io::run_config_from(io::KeyValueDocument::parse(io::run_config_document(c).serialize()));
  CHECK(again.grid->points == 11);
  CHECK(*again.s0_table == *c.s0_table);

  CHECK(category_of([] {
          (void)io::run_config_from(io::KeyValueDocument::parse("spec_version = 1\ngrid.start = 2e9\ngrid.stop = 1e9\n"));
        }) == ErrorCategory::domain);
  CHECK(category_of([] {
          (void)io::run_config_from(
              io::KeyValueDocument::parse("spec_version = 1\ngrid.start = 1e9\ngrid.stop = 2e9\ngrid.points = 1\n"));
        }) == ErrorCategory::parse);
}

TEST_CASE("dispersion CSV") {
  const auto t = io::read_dispersion_file(data_path("s0_lnosic.csv"));
  CHECK(t.mode() == AcousticMode::S0);
  CHECK(t.provenance().find("Anchors") != std::string::npos);
  const auto back = io::read_dispersion_csv(io::write_dispersion_csv(t));
  CHECK(back.samples().size() == t.samples().size());
  for (std::size_t i = 0; i < t.samples().size(); ++i) CHECK(back.samples()[i].vp == t.samples()[i].vp);
  CHECK(io::write_dispersion_csv(back) == io::write_dispersion_csv(t));

  CHECK(category_of([] { (void)io::read_dispersion_csv("h,vp,k2\n0.1,1,0.1\n"); }) == ErrorCategory::parse);
  CHECK(category_of([] { (void)io::read_dispersion_csv("h_over_lambda,vp_mps,k2\n0.1,1,0.1\n"); }) == ErrorCategory::parse);
  const std::string body = "h_over_lambda,vp_mps,k2\n0.1,5000,0.1\n0.2,4900,0.1\n0.3,4800,0.1\n0.4,4700,0.1\n";
  CHECK(io::read_dispersion_csv(body, AcousticMode::SH0).mode() == AcousticMode::SH0);
  CHECK(category_of([&] { (void)io::read_dispersion_csv("# mode: S0\n" + body + "0.5,4600\n"); }) == ErrorCategory::parse);
}

TEST_CASE("delay-line CSV") {
  const auto ds = io::read_delay_line_csv("# damping: 0.002\ngap_wavelengths,s21_mag\n50,0.5335\n100,0.2846\n");
  CHECK(*ds.damping_input == 0.002);
  REQUIRE(ds.runs.size() == 2);
  CHECK(ds.runs[1].gap_wavelengths == 100.0);
  const auto back = io::read_delay_line_csv(io::write_delay_line_csv(ds));
  CHECK(back.runs[0].s21_magnitude == 0.5335);
  CHECK(*back.damping_input == 0.002);
}
