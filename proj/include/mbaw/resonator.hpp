#pragma once

// Modified Butterworth-Van Dyke (mBVD) resonator model.
//
//          rs
//   o----/\/\/----+-----------+-----------+---- ...
//                 |           |           |
//                 r0          rm          rm'      (one motional branch per
//                 |           lm          lm'       spur, all in parallel)
//                 c0          cm          cm'
//                 |           |           |
//   o-------------+-----------+-----------+---- ...

#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "mbaw/error.hpp"

namespace mbaw {

enum class BranchKind { main, transverse, leaky, overtone };

std::string to_string(BranchKind kind);
BranchKind branch_kind_from_string(const std::string& text);

struct BranchLabel {
  BranchKind kind = BranchKind::main;
  int order = 0;  // transverse order m or overtone order n; 0 otherwise

  friend bool operator==(const BranchLabel&, const BranchLabel&) = default;
};

/// Series rm-lm-cm arm of the equivalent circuit.
struct MotionalBranch {
  double rm = 0.0;  // ohm
  double lm = 0.0;  // henry
  double cm = 0.0;  // farad
  BranchLabel label;

  /// 1 / (2 pi sqrt(lm cm)).
  double resonance() const;
  void validate() const;

  friend bool operator==(const MotionalBranch&, const MotionalBranch&) = default;
};

struct ResonatorModel {
  double c0 = 0.0;  // static capacitance, farad
  double r0 = 0.0;  // dielectric loss in series with c0, ohm
  double rs = 0.0;  // series electrode resistance, ohm
  MotionalBranch main;
  std::vector<MotionalBranch> spurs;

  /// Throws Error{domain} when any invariant is violated.
  void validate() const;

  friend bool operator==(const ResonatorModel&, const ResonatorModel&) = default;
};

/// Convenience constructor that validates.
ResonatorModel make_resonator(double c0, MotionalBranch main, std::vector<MotionalBranch> spurs = {},
                              double r0 = 0.0, double rs = 0.0);

template <typename Scalar>
std::complex<Scalar> branch_admittance(const MotionalBranch& b, Scalar omega) {
  using C = std::complex<Scalar>;
  const C z = C(Scalar(b.rm), omega * Scalar(b.lm) - Scalar(1) / (omega * Scalar(b.cm)));
  return Scalar(1) / z;
}

/// Terminal admittance of the model at frequency f (Hz).
template <typename Scalar = double>
std::complex<Scalar> admittance(const ResonatorModel& model, Scalar f) {
  using C = std::complex<Scalar>;
  if (!(f > Scalar(0))) throw Error(ErrorCategory::domain, "admittance: frequency must be positive");
  const Scalar omega = Scalar(2) * std::numbers::pi_v<Scalar> * f;
  const C jwc0(Scalar(0), omega * Scalar(model.c0));
  C core = jwc0 / (Scalar(1) + jwc0 * Scalar(model.r0));
  core += branch_admittance(model.main, omega);
  for (const auto& spur : model.spurs) core += branch_admittance(spur, omega);
  return Scalar(1) / (Scalar(model.rs) + Scalar(1) / core);
}

struct ResonancePair {
  double fr = 0.0;
  double fa = 0.0;
};

/// Lossless closed form on the main branch and c0; spurs are ignored.
ResonancePair resonance_frequencies(const ResonatorModel& model);

/// k^2 = (pi^2/8) (fa^2 - fr^2) / fa^2.
double coupling_from_frequencies(double fr, double fa);

/// Inverse of coupling_from_frequencies expressed as the cm/c0 ratio.
double capacitance_ratio_from_coupling(double k2);

/// Quality factor that may be unbounded (zero motional resistance).
class QualityFactor {
 public:
  static QualityFactor unbounded() { return QualityFactor(); }
  explicit QualityFactor(double value);

  bool bounded() const { return bounded_; }
  /// Throws Error{domain} if unbounded.
  double value() const;

 private:
  QualityFactor() = default;
  double value_ = 0.0;
  bool bounded_ = false;
};

/// Qm = sqrt(lm/cm) / rm of the main branch.
QualityFactor quality_factor(const ResonatorModel& model);

}  // namespace mbaw
