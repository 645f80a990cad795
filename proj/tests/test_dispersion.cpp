#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mbaw/dispersion.hpp"
#include "mbaw/io/tables.hpp"

using namespace mbaw;

namespace {

const PlatformConstants kConsts;

DispersionTable shipped(const char* name) { return io::read_dispersion_file(std::string(MBAW_DATA_DIR) + "/" + name); }

DispersionTable flat(double vp) {
  return DispersionTable(AcousticMode::S0, {{0.1, vp, 0.1}, {0.2, vp, 0.1}, {0.3, vp, 0.1}, {0.4, vp, 0.1}});
}

ErrorCategory category_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.category();
  }
  FAIL("expected an error");
  return ErrorCategory::usage;
}

}  // namespace

TEST_CASE("interpolant hits samples and reproduces linear data") {
  const auto t = shipped("s0_lnosic.csv");
  for (const auto& s : t.samples()) {
    const auto p = interpolate(t, s.h_over_lambda);
    CHECK(p.vp == s.vp);
    CHECK(p.k2 == s.k2);
  }
  CHECK(interpolate(t, 0.25).vp == 6660.0);

  const DispersionTable line(AcousticMode::SH0, {{0.1, 5000, 0.05}, {0.2, 4800, 0.07}, {0.3, 4600, 0.09}, {0.4, 4400, 0.11}});
  for (double x : {0.15, 0.25, 0.35, 0.123}) {
    CHECK(interpolate(line, x).vp == doctest::Approx(5200.0 - 2000.0 * x).epsilon(1e-13));
    CHECK(interpolate(line, x).k2 == doctest::Approx(0.03 + 0.2 * x).epsilon(1e-13));
  }
}

TEST_CASE("interpolant never overshoots its neighbours") {
  // Step-like data that a plain cubic spline would ring on.
  const MonotoneCubic<double> c({0.0, 1.0, 2.0, 3.0, 4.0, 5.0}, {0.0, 0.0, 0.0, 1.0, 1.0, 1.0});
  for (double x = 0.0; x <= 5.0; x += 0.001) {
    const double y = c(x);
    CHECK(y >= 0.0);
    CHECK(y <= 1.0);
  }
  // Monotone data stays monotone.
  const auto t = shipped("sh0_lnosic.csv");
  double prev = 1e9;
  for (double x = t.lower(); x <= t.upper(); x += 1e-4) {
    const double v = interpolate(t, x).vp;
    CHECK(v <= prev + 1e-9);
    prev = v;
  }
}

TEST_CASE("queries outside the table name the valid interval") {
  const auto t = shipped("s0_lnosic.csv");
  try {
    (void)interpolate(t, 0.9);
    FAIL("expected range error");
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::range);
    CHECK(std::string(e.what()).find("0.1") != std::string::npos);
    CHECK(std::string(e.what()).find("0.45") != std::string::npos);
  }
}

TEST_CASE("table invariants") {
  CHECK_THROWS_AS(DispersionTable(AcousticMode::S0, {{0.1, 6000, 0.1}, {0.2, 6000, 0.1}, {0.3, 6000, 0.1}}), Error);
  CHECK_THROWS_AS(DispersionTable(AcousticMode::S0, {{0.1, 6000, 0.1}, {0.1, 6000, 0.1}, {0.3, 6000, 0.1}, {0.4, 6000, 0.1}}),
                  Error);
  CHECK_THROWS_AS(DispersionTable(AcousticMode::S0, {{0.1, 6000, 0.1}, {0.2, 6000, 0.1}, {0.3, 25000, 0.1}, {0.4, 6000, 0.1}}),
                  Error);
  CHECK_THROWS_AS(DispersionTable(AcousticMode::S0, {{0.1, 6000, 0.1}, {0.2, 6000, 1.3}, {0.3, 6000, 0.1}, {0.4, 6000, 0.1}}),
                  Error);
  const DispersionTable fast(AcousticMode::SH0, {{0.1, 8000, 0.1}, {0.2, 7900, 0.1}, {0.3, 7800, 0.1}, {0.4, 7700, 0.1}});
  CHECK_THROWS_AS(fast.check_against(kConsts), Error);
  CHECK_NOTHROW(shipped("sh0_lnosic.csv").check_against(kConsts));
}

TEST_CASE("frequency anchors on the shipped S0 table") {
  const auto t = shipped("s0_lnosic.csv");
  CHECK(frequency_for(t, kConsts, 1.8e-6) == doctest::Approx(3.70e9).epsilon(1e-12));
  CHECK(frequency_for(t, kConsts, 1.5e-6) == doctest::Approx(4.40e9).epsilon(1e-12));
}

TEST_CASE("flat table: doubling lambda halves f") {
  const auto t = flat(6000.0);
  const double l = kConsts.film_thickness_h / 0.3;
  CHECK(frequency_for(t, kConsts, 2.0 * l) == doctest::Approx(0.5 * frequency_for(t, kConsts, l)).epsilon(1e-14));
}

TEST_CASE("wavelength inversion") {
  const auto s0 = shipped("s0_lnosic.csv");
  CHECK(wavelength_for_frequency(s0, kConsts, 4.40e9) == doctest::Approx(1.5e-6).epsilon(1e-9));
  CHECK(wavelength_for_frequency(s0, kConsts, 3.70e9) == doctest::Approx(1.8e-6).epsilon(1e-9));
  const auto sh0 = shipped("sh0_lnosic.csv");
  for (double x = 0.06; x < 0.39; x += 0.0137) {
    const double l0 = kConsts.film_thickness_h / x;
    const double f = frequency_for(sh0, kConsts, l0);
    const double l = wavelength_for_frequency(sh0, kConsts, f);
    CHECK(l == doctest::Approx(l0).epsilon(1e-9));
    CHECK(std::abs(frequency_for(sh0, kConsts, l) - f) / f < 1e-9);
  }
  const auto range = achievable_frequencies(s0, kConsts);
  CHECK(category_of([&] { (void)wavelength_for_frequency(s0, kConsts, range.hi * 1.01); }) == ErrorCategory::range);
  CHECK(category_of([&] { (void)wavelength_for_frequency(s0, kConsts, range.lo * 0.99); }) == ErrorCategory::range);
}

TEST_CASE("non-monotone f(lambda) is reported as ambiguous") {
  // x * vp rises then falls, so one frequency is hit twice.
  const DispersionTable hump(AcousticMode::S0, {{0.1, 6000, 0.1}, {0.2, 5000, 0.1}, {0.3, 2500, 0.1}, {0.4, 1500, 0.1}});
  const double f = 0.15 * 5600 / kConsts.film_thickness_h;
  try {
    (void)wavelength_for_frequency(hump, kConsts, f * 0.9);
    FAIL("expected ambiguity");
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::ambiguity);
  }
}

TEST_CASE("mode selection") {
  CHECK(select_mode(1.4e9) == AcousticMode::SH0);
  CHECK(select_mode(4.4e9) == AcousticMode::S0);
  CHECK(select_mode(3.0e9) == AcousticMode::S0);
  CHECK(select_mode(2.0e9, 1.5e9) == AcousticMode::S0);
}

TEST_CASE("regime classification") {
  CHECK(classify_regime(kConsts, 5.0e-6) == Regime::SED);
  CHECK(classify_regime(kConsts, 2.5e-6) == Regime::standard);
  CHECK(classify_regime(kConsts, 1.5e-6) == Regime::out_of_validated_range);
  CHECK(classify_regime(kConsts, 450e-9 / 0.15) == Regime::standard);
}

TEST_CASE("platform constants must be positive") {
  PlatformConstants c;
  c.v_ssb = 0.0;
  CHECK_THROWS_AS(c.validate(), Error);
}
