#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "mbaw/error.hpp"

namespace mbaw {

enum class AcousticMode { SH0, S0 };

std::string to_string(AcousticMode mode);
AcousticMode acoustic_mode_from_string(const std::string& text);

struct DispersionSample {
  double h_over_lambda = 0.0;
  double vp = 0.0;  // m/s
  double k2 = 0.0;  // fraction
};

/// Shape-preserving piecewise cubic Hermite interpolant (Fritsch-Butland
/// derivative weights, three-point endpoint rule). Never overshoots the
/// neighbouring samples and reproduces linear data exactly.
template <typename Scalar>
class MonotoneCubic {
 public:
  MonotoneCubic() = default;
  MonotoneCubic(std::vector<Scalar> x, std::vector<Scalar> y);

  Scalar operator()(Scalar x) const;

  Scalar lower() const { return x_.front(); }
  Scalar upper() const { return x_.back(); }

 private:
  std::vector<Scalar> x_, y_, d_;
};

struct PlatformConstants {
  double film_thickness_h = 450e-9;     // m
  double electrode_thickness = 120e-9;  // m
  double v_ssb = 7150.0;                // m/s, slow shear bulk velocity of the carrier

  void validate() const;
};

struct DispersionPoint {
  double vp = 0.0;
  double k2 = 0.0;
};

class DispersionTable {
 public:
  /// Validates sample ordering and ranges, throws Error{domain}.
  DispersionTable(AcousticMode mode, std::vector<DispersionSample> samples, std::string provenance = {});

  AcousticMode mode() const { return mode_; }
  const std::vector<DispersionSample>& samples() const { return samples_; }
  const std::string& provenance() const { return provenance_; }

  double lower() const { return samples_.front().h_over_lambda; }
  double upper() const { return samples_.back().h_over_lambda; }

  DispersionPoint at(double h_over_lambda) const;

  /// SH0 tables must stay below the slow shear bulk line (+5 % band).
  void check_against(const PlatformConstants& consts) const;

 private:
  AcousticMode mode_;
  std::vector<DispersionSample> samples_;
  std::string provenance_;
  MonotoneCubic<double> vp_, k2_;
};

DispersionPoint interpolate(const DispersionTable& table, double h_over_lambda);

double frequency_for(const DispersionTable& table, const PlatformConstants& consts, double lambda);

struct InversionOptions {
  double rel_tolerance = 1e-9;
  int monotonicity_samples_per_interval = 64;
};

double wavelength_for_frequency(const DispersionTable& table, const PlatformConstants& consts, double f_target,
                                const InversionOptions& options = {});

/// Range of resonance frequencies reachable by the table, [f_min, f_max].
struct FrequencyRange {
  double lo = 0.0;
  double hi = 0.0;
};
FrequencyRange achievable_frequencies(const DispersionTable& table, const PlatformConstants& consts);

inline constexpr double kDefaultModeThreshold = 3e9;

/// SH0 below the threshold, S0 at and above it.
AcousticMode select_mode(double f_target, double threshold = kDefaultModeThreshold);

enum class Regime { SED, standard, out_of_validated_range };

std::string to_string(Regime regime);

Regime classify_regime(const PlatformConstants& consts, double lambda);

// Template definitions.

template <typename Scalar>
MonotoneCubic<Scalar>::MonotoneCubic(std::vector<Scalar> x, std::vector<Scalar> y) : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n < 2 || y_.size() != n) throw Error(ErrorCategory::domain, "monotone cubic needs >= 2 matching samples");
  std::vector<Scalar> h(n - 1), delta(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    h[k] = x_[k + 1] - x_[k];
    if (!(h[k] > Scalar(0))) throw Error(ErrorCategory::domain, "monotone cubic abscissas must increase");
    delta[k] = (y_[k + 1] - y_[k]) / h[k];
  }
  d_.assign(n, Scalar(0));
  if (n == 2) {
    d_[0] = d_[1] = delta[0];
    return;
  }
  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (delta[k - 1] * delta[k] <= Scalar(0)) continue;
    const Scalar w1 = Scalar(2) * h[k] + h[k - 1];
    const Scalar w2 = h[k] + Scalar(2) * h[k - 1];
    d_[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
  }
  auto edge = [](Scalar h0, Scalar h1, Scalar m0, Scalar m1) {
    Scalar d = ((Scalar(2) * h0 + h1) * m0 - h0 * m1) / (h0 + h1);
    auto sign = [](Scalar v) { return (v > Scalar(0)) - (v < Scalar(0)); };
    if (sign(d) != sign(m0)) return Scalar(0);
    if (sign(m0) != sign(m1) && std::abs(d) > Scalar(3) * std::abs(m0)) return Scalar(3) * m0;
    return d;
  };
  d_[0] = edge(h[0], h[1], delta[0], delta[1]);
  d_[n - 1] = edge(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
}

template <typename Scalar>
Scalar MonotoneCubic<Scalar>::operator()(Scalar x) const {
  if (x < x_.front() || x > x_.back()) throw Error(ErrorCategory::range, "monotone cubic query outside samples");
  std::size_t k = 0;
  {
    std::size_t lo = 0, hi = x_.size() - 1;
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      (x_[mid] <= x ? lo : hi) = mid;
    }
    k = lo;
  }
  if (x == x_[k]) return y_[k];
  if (x == x_[k + 1]) return y_[k + 1];
  const Scalar h = x_[k + 1] - x_[k];
  const Scalar t = (x - x_[k]) / h;
  const Scalar t2 = t * t, t3 = t2 * t;
  const Scalar h00 = Scalar(2) * t3 - Scalar(3) * t2 + Scalar(1);
  const Scalar h10 = t3 - Scalar(2) * t2 + t;
  const Scalar h01 = Scalar(-2) * t3 + Scalar(3) * t2;
  const Scalar h11 = t3 - t2;
  return h00 * y_[k] + h10 * h * d_[k] + h01 * y_[k + 1] + h11 * h * d_[k + 1];
}

}  // namespace mbaw
