#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <string>

#include "mbaw/io/documents.hpp"
#include "mbaw/io/keyvalue.hpp"
#include "mbaw/io/text.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using namespace mbaw;
using mbaw::testing::data_path;

namespace {

struct Run {
  int status = -1;
  std::string out;
  std::string err;
};

const fs::path& work_dir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / "mbaw_test_cli";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

Run run(const std::string& args) {
  const auto err_path = work_dir() / "stderr.txt";
  const std::string cmd = std::string(MBAW_CLI_PATH) + " " + args + " 2>" + err_path.string();
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.err = io::read_file(err_path);
  return r;
}

io::KeyValueDocument report(const Run& r) { return io::KeyValueDocument::parse(r.out); }

std::string path(const std::string& name) { return (work_dir() / name).string(); }

}  // namespace

TEST_CASE("unknown subcommand is a usage error") {
  const auto r = run("frobnicate");
  CHECK(r.status == 2);
  CHECK(r.err.rfind("usage: ", 0) == 0);
  CHECK(r.out.empty());
  CHECK(run("").status == 2);
  CHECK(run("--help").status == 0);
}

TEST_CASE("missing input is a single machine-readable line") {
  const auto r = run("fitloss --csv " + path("nope.csv"));
  CHECK(r.status == 1);
  CHECK(r.err.rfind("io: ", 0) == 0);
  CHECK(r.err.find('\n') == r.err.size() - 1);
}

TEST_CASE("dispersion report") {
  const auto r = run("dispersion --table " + data_path("s0_lnosic.csv") + " --lambda 1.8e-6");
  REQUIRE(r.status == 0);
  const auto doc = report(r);
  CHECK(doc.get_double("f_hz") == doctest::Approx(3.70e9).epsilon(1e-12));
  CHECK(doc.get_double("vp_mps") == 6660.0);
  CHECK(doc.get_string("regime") == "out_of_validated_range");

  const auto sed = report(run("dispersion --table " + data_path("sh0_lnosic.csv") + " --lambda 5e-6"));
  CHECK(sed.get_string("regime") == "SED");

  const auto range = run("dispersion --table " + data_path("s0_lnosic.csv") + " --lambda 1e-3");
  CHECK(range.status == 1);
  CHECK(range.err.rfind("range: ", 0) == 0);
}

TEST_CASE("resonator then analyze recovers the analytic Q") {
  // h/lambda = 0.14 on the SH0 table: the 1.45 GHz anchor.
  io::write_file(path("geom.txt"), "spec_version = 1\nlambda = 3.2142857142857143e-06\naperture_w = 2e-05\nq_assumed = 3680\n");
  const auto res = run("resonator --table " + data_path("sh0_lnosic.csv") + " --geom " + path("geom.txt") +
                       " --grid 1.40e9 1.55e9 15001 --out " + path("res"));
  REQUIRE(res.status == 0);
  const auto model = report(res);
  CHECK(model.get_double("fr_hz") == doctest::Approx(1.45e9).epsilon(1e-9));
  CHECK(model.get_double("q") == doctest::Approx(3680).epsilon(1e-9));
  CHECK(fs::exists(path("res/resonator.s1p")));
  CHECK(fs::exists(path("res/resonator_report.txt")));

  const auto an = run("analyze --one-port --sNp " + path("res/resonator.s1p") + " --out " + path("res"));
  REQUIRE(an.status == 0);
  const auto doc = report(an);
  CHECK(doc.get_double("qmax") == doctest::Approx(3680).epsilon(0.02));
  CHECK(doc.get_double("k2") == doctest::Approx(0.0867).epsilon(5e-3));
  CHECK(doc.get_double("fom") >= 0.97 * 319.1);
  const auto csv = io::read_file(doc.get_string("bode_q_csv"));
  CHECK(csv.rfind("frequency_hz,bode_q\n", 0) == 0);

  const auto fit = run("fit --sNp " + path("res/resonator.s1p"));
  REQUIRE(fit.status == 0);
  CHECK(report(fit).get_double("fr_hz") == doctest::Approx(1.45e9).epsilon(1e-6));
  CHECK(report(fit).get_bool("converged"));

  CHECK(run("analyze --two-port --sNp " + path("res/resonator.s1p")).status == 2);
}

TEST_CASE("synth, filter and analyze agree; outputs are deterministic") {
  io::write_file(path("spec.txt"), "spec_version = 1\nfc_target = 1.45e9\nfbw_target = 0.035\nq_assumed = 3000\n");
  const std::string tables = " --table " + data_path("sh0_lnosic.csv") + " --table " + data_path("s0_lnosic.csv");
  const auto a = run("synth --spec " + path("spec.txt") + tables + " --out " + path("syn_a"));
  REQUIRE(a.status == 0);
  const auto doc = report(a);
  CHECK(std::abs(doc.get_double("error.fc_relative")) < 0.01);
  CHECK(std::abs(doc.get_double("error.fbw_relative")) < 0.10);
  CHECK(doc.get_bool("targets_met"));
  CHECK(doc.get_string("mode") == "SH0");

  const auto b = run("synth --spec " + path("spec.txt") + tables + " --out " + path("syn_b"));
  CHECK(io::read_file(path("syn_a/synth.s2p")) == io::read_file(path("syn_b/synth.s2p")));
  CHECK(io::read_file(path("syn_a/synth_topology.txt")) == io::read_file(path("syn_b/synth_topology.txt")));

  // The topology file reads back losslessly.
  const auto topo_text = io::read_file(path("syn_a/synth_topology.txt"));
  CHECK(io::topology_document(io::topology_from(io::KeyValueDocument::parse(topo_text))).serialize() == topo_text);

  const std::string band = " --band 1.40e9 1.50e9";
  const auto f = run("filter --topology " + path("syn_a/synth_topology.txt") + " --grid 1.3e9 1.6e9 3001" + band +
                     " --out " + path("flt"));
  REQUIRE(f.status == 0);
  CHECK(report(f).get_double("fc_hz") == doctest::Approx(1.45e9).epsilon(0.01));

  const auto an = run("analyze --sNp " + path("syn_a/synth.s2p") + band);
  REQUIRE(an.status == 0);
  CHECK(report(an).get_double("fc_hz") == doctest::Approx(doc.get_double("achieved.fc_hz")).epsilon(1e-6));
}

TEST_CASE("synth presets and infeasible specs") {
  const auto r = run("synth --preset F1 --table " + data_path("sh0_lnosic.csv") + " --out " + path("f1"));
  REQUIRE(r.status == 0);
  CHECK(report(r).get_bool("targets_met"));
  io::write_file(path("wide.txt"), "spec_version = 1\nfc_target = 1.45e9\nfbw_target = 0.08\n");
  const auto w = run("synth --spec " + path("wide.txt") + " --table " + data_path("sh0_lnosic.csv") + " --out " + path("w"));
  CHECK(w.status == 1);
  CHECK(w.err.rfind("feasibility: ", 0) == 0);
  CHECK(run("synth --preset F9 --table " + data_path("sh0_lnosic.csv")).status == 2);
  CHECK(report(run("presets")).get_double("F8.bw3db_hz") == 488e6);
}

TEST_CASE("fitloss") {
  io::write_file(path("dl.csv"), "# damping: 0.002\ngap_wavelengths,s21_mag\n50,0.5335\n100,0.2846\n200,0.0810\n");
  const auto r = run("fitloss --csv " + path("dl.csv"));
  REQUIRE(r.status == 0);
  CHECK(report(r).get_double("delta") == doctest::Approx(0.002).epsilon(1e-3));
  io::write_file(path("same.csv"), "gap_wavelengths,s21_mag\n50,0.5\n50,0.4\n");
  const auto same = run("fitloss --csv " + path("same.csv"));
  CHECK(same.status == 1);
  CHECK(same.err.rfind("rank: ", 0) == 0);
}

TEST_CASE("config file supplies tables and grid") {
  io::write_file(path("cfg/run.txt"), "spec_version = 1\ntable.sh0 = " + data_path("sh0_lnosic.csv") +
                                          "\noutput_dir = out\ngrid.start = 1.40e9\ngrid.stop = 1.55e9\ngrid.points = 3001\n");
  const auto r = run("resonator --config " + path("cfg/run.txt") + " --geom " + path("geom.txt"));
  REQUIRE(r.status == 0);
  CHECK(fs::exists(path("cfg/out/resonator.s1p")));
}
