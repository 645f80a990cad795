#include "mbaw/dispersion.hpp"

#include <algorithm>
#include <numbers>
#include <sstream>

namespace mbaw {

namespace {

constexpr double kMaxVelocity = 20000.0;
constexpr double kSsbTolerance = 0.05;
constexpr double kSedLimit = 0.15;
constexpr double kStandardLimit = 0.25;

std::vector<double> column(const std::vector<DispersionSample>& s, double DispersionSample::*field) {
  std::vector<double> out;
  out.reserve(s.size());
  for (const auto& v : s) out.push_back(v.*field);
  return out;
}

std::string interval_text(double lo, double hi) {
  std::ostringstream os;
  os.precision(6);
  os << "[" << lo << ", " << hi << "]";
  return os.str();
}

}  // namespace

std::string to_string(AcousticMode mode) { return mode == AcousticMode::SH0 ? "SH0" : "S0"; }

AcousticMode acoustic_mode_from_string(const std::string& text) {
  if (text == "SH0" || text == "sh0") return AcousticMode::SH0;
  if (text == "S0" || text == "s0") return AcousticMode::S0;
  throw Error(ErrorCategory::parse, "unknown acoustic mode '" + text + "' (expected SH0 or S0)");
}

void PlatformConstants::validate() const {
  if (!(film_thickness_h > 0.0) || !(electrode_thickness > 0.0) || !(v_ssb > 0.0))
    throw Error(ErrorCategory::domain, "platform constants must be positive");
}

DispersionTable::DispersionTable(AcousticMode mode, std::vector<DispersionSample> samples, std::string provenance)
    : mode_(mode), samples_(std::move(samples)), provenance_(std::move(provenance)) {
  if (samples_.size() < 4) throw Error(ErrorCategory::domain, "dispersion table needs at least 4 samples");
  const double k2_max = std::numbers::pi * std::numbers::pi / 8.0;
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const auto& s = samples_[i];
    std::ostringstream where;
    where << "dispersion sample " << i << ": ";
    if (!(s.h_over_lambda > 0.0 && s.h_over_lambda < 1.0))
      throw Error(ErrorCategory::domain, where.str() + "h_over_lambda must lie in (0, 1)");
    if (i > 0 && !(s.h_over_lambda > samples_[i - 1].h_over_lambda))
      throw Error(ErrorCategory::domain, where.str() + "h_over_lambda must be strictly increasing");
    if (!(s.vp > 0.0 && s.vp < kMaxVelocity))
      throw Error(ErrorCategory::domain, where.str() + "vp must lie in (0, 20000) m/s");
    if (!(s.k2 > 0.0 && s.k2 < k2_max)) throw Error(ErrorCategory::domain, where.str() + "k2 must lie in (0, pi^2/8)");
  }
  const auto x = column(samples_, &DispersionSample::h_over_lambda);
  vp_ = MonotoneCubic<double>(x, column(samples_, &DispersionSample::vp));
  k2_ = MonotoneCubic<double>(x, column(samples_, &DispersionSample::k2));
}

DispersionPoint DispersionTable::at(double h_over_lambda) const {
  if (!(h_over_lambda >= lower() && h_over_lambda <= upper()))
    throw Error(ErrorCategory::range, "h/lambda query " + std::to_string(h_over_lambda) + " outside table domain " +
                                          interval_text(lower(), upper()));
  return {vp_(h_over_lambda), k2_(h_over_lambda)};
}

void DispersionTable::check_against(const PlatformConstants& consts) const {
  if (mode_ != AcousticMode::SH0) return;
  const double ceiling = consts.v_ssb * (1.0 + kSsbTolerance);
  for (const auto& s : samples_) {
    if (s.vp > ceiling) {
      std::ostringstream os;
      os << "SH0 table velocity " << s.vp << " m/s at h/lambda=" << s.h_over_lambda
         << " exceeds the slow shear bulk line " << consts.v_ssb << " m/s by more than 5%";
      throw Error(ErrorCategory::domain, os.str());
    }
  }
}

DispersionPoint interpolate(const DispersionTable& table, double h_over_lambda) { return table.at(h_over_lambda); }

double frequency_for(const DispersionTable& table, const PlatformConstants& consts, double lambda) {
  if (!(lambda > 0.0)) throw Error(ErrorCategory::domain, "wavelength must be positive");
  double hl = consts.film_thickness_h / lambda;
  // Absorb the rounding of h / (h / x) at the domain edges.
  if (hl < table.lower() && hl > table.lower() * (1.0 - 1e-12)) hl = table.lower();
  if (hl > table.upper() && hl < table.upper() * (1.0 + 1e-12)) hl = table.upper();
  if (!(hl >= table.lower() && hl <= table.upper())) {
    std::ostringstream os;
    os << "wavelength " << lambda << " m gives h/lambda=" << hl << " outside table domain "
       << interval_text(table.lower(), table.upper()) << " (lambda in "
       << interval_text(consts.film_thickness_h / table.upper(), consts.film_thickness_h / table.lower()) << " m)";
    throw Error(ErrorCategory::range, os.str());
  }
  return table.at(hl).vp / lambda;
}

namespace {

// f as a function of x = h/lambda: f = vp(x) x / h.
double frequency_at_ratio(const DispersionTable& table, const PlatformConstants& consts, double x) {
  return table.at(x).vp * x / consts.film_thickness_h;
}

std::vector<double> ratio_samples(const DispersionTable& table, int per_interval) {
  std::vector<double> xs;
  const auto& s = table.samples();
  for (std::size_t k = 0; k + 1 < s.size(); ++k) {
    for (int j = 0; j < per_interval; ++j) {
      const double t = static_cast<double>(j) / per_interval;
      xs.push_back(s[k].h_over_lambda + t * (s[k + 1].h_over_lambda - s[k].h_over_lambda));
    }
  }
  xs.push_back(s.back().h_over_lambda);
  return xs;
}

}  // namespace

FrequencyRange achievable_frequencies(const DispersionTable& table, const PlatformConstants& consts) {
  const auto xs = ratio_samples(table, 64);
  FrequencyRange r{frequency_at_ratio(table, consts, xs.front()), frequency_at_ratio(table, consts, xs.front())};
  for (double x : xs) {
    const double f = frequency_at_ratio(table, consts, x);
    r.lo = std::min(r.lo, f);
    r.hi = std::max(r.hi, f);
  }
  return r;
}

double wavelength_for_frequency(const DispersionTable& table, const PlatformConstants& consts, double f_target,
                                const InversionOptions& options) {
  if (!(f_target > 0.0)) throw Error(ErrorCategory::domain, "target frequency must be positive");
  const auto xs = ratio_samples(table, std::max(2, options.monotonicity_samples_per_interval));
  std::vector<double> fs;
  fs.reserve(xs.size());
  for (double x : xs) fs.push_back(frequency_at_ratio(table, consts, x));

  const auto [lo_it, hi_it] = std::minmax_element(fs.begin(), fs.end());
  if (f_target < *lo_it || f_target > *hi_it) {
    std::ostringstream os;
    os << "target " << f_target << " Hz outside achievable range " << interval_text(*lo_it, *hi_it) << " Hz";
    throw Error(ErrorCategory::range, os.str());
  }

  // Brackets [xs[i], xs[i+1]] where f - target changes sign. An exact hit on
  // a shared node is only counted once.
  std::vector<std::size_t> brackets;
  for (std::size_t i = 0; i + 1 < fs.size(); ++i) {
    const double a = fs[i] - f_target, b = fs[i + 1] - f_target;
    if (a == 0.0 || a * b < 0.0 || (b == 0.0 && i + 2 == fs.size())) brackets.push_back(i);
  }
  if (brackets.size() > 1) {
    std::ostringstream os;
    os << "frequency is not monotone in wavelength; " << brackets.size() << " candidate wavelengths for "
       << f_target << " Hz:";
    for (auto i : brackets)
      os << " " << interval_text(consts.film_thickness_h / xs[i + 1], consts.film_thickness_h / xs[i]) << " m";
    throw Error(ErrorCategory::ambiguity, os.str());
  }
  if (brackets.empty()) throw Error(ErrorCategory::range, "no bracket found for target frequency");

  double a = xs[brackets[0]], b = xs[brackets[0] + 1];
  double fa = fs[brackets[0]] - f_target;
  if (fa == 0.0) return consts.film_thickness_h / a;
  if (fs[brackets[0] + 1] == f_target) return consts.film_thickness_h / b;
  for (int it = 0; it < 200 && b - a > 1e-15 * b; ++it) {
    const double m = 0.5 * (a + b);
    const double fm = frequency_at_ratio(table, consts, m) - f_target;
    if (fm == 0.0) {
      a = b = m;
      break;
    }
    if ((fm < 0.0) == (fa < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  const double x = 0.5 * (a + b);
  const double lambda = consts.film_thickness_h / x;
  const double achieved = frequency_for(table, consts, lambda);
  if (std::abs(achieved - f_target) / f_target >= options.rel_tolerance)
    throw Error(ErrorCategory::range, "wavelength inversion did not reach the requested tolerance");
  return lambda;
}

AcousticMode select_mode(double f_target, double threshold) {
  return f_target < threshold ? AcousticMode::SH0 : AcousticMode::S0;
}

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::SED: return "SED";
    case Regime::standard: return "standard";
    case Regime::out_of_validated_range: return "out_of_validated_range";
  }
  return "standard";
}

Regime classify_regime(const PlatformConstants& consts, double lambda) {
  const double hl = consts.film_thickness_h / lambda;
  if (hl < kSedLimit) return Regime::SED;
  if (hl < kStandardLimit) return Regime::standard;
  return Regime::out_of_validated_range;
}

}  // namespace mbaw
