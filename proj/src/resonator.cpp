#include "mbaw/resonator.hpp"

#include <cmath>
#include <sstream>

namespace mbaw {

namespace {

constexpr double kPi = std::numbers::pi;

// Spur resonances closer than this (relative) to the main resonance are
// treated as coincident.
constexpr double kDistinctResonance = 1e-9;

}  // namespace

std::string to_string(BranchKind kind) {
  switch (kind) {
    case BranchKind::main: return "main";
    case BranchKind::transverse: return "transverse";
    case BranchKind::leaky: return "leaky";
    case BranchKind::overtone: return "overtone";
  }
  return "main";
}

BranchKind branch_kind_from_string(const std::string& text) {
  if (text == "main") return BranchKind::main;
  if (text == "transverse") return BranchKind::transverse;
  if (text == "leaky") return BranchKind::leaky;
  if (text == "overtone") return BranchKind::overtone;
  throw Error(ErrorCategory::parse, "unknown branch kind '" + text + "'");
}

double MotionalBranch::resonance() const { return 1.0 / (2.0 * kPi * std::sqrt(lm * cm)); }

void MotionalBranch::validate() const {
  if (!(lm > 0.0) || !(cm > 0.0) || !(rm >= 0.0))
    throw Error(ErrorCategory::domain, "motional branch requires lm > 0, cm > 0, rm >= 0");
  const double f = resonance();
  if (!std::isfinite(f) || !(f > 0.0))
    throw Error(ErrorCategory::domain, "motional branch resonance is not finite and positive");
}

void ResonatorModel::validate() const {
  if (!(c0 > 0.0)) throw Error(ErrorCategory::domain, "resonator requires c0 > 0");
  if (!(r0 >= 0.0) || !(rs >= 0.0)) throw Error(ErrorCategory::domain, "resonator requires r0, rs >= 0");
  if (main.label.kind != BranchKind::main)
    throw Error(ErrorCategory::domain, "resonator main branch must be labeled main");
  main.validate();
  const double fr = main.resonance();
  for (const auto& spur : spurs) {
    if (spur.label.kind == BranchKind::main)
      throw Error(ErrorCategory::domain, "resonator has more than one main branch");
    spur.validate();
    if (std::abs(spur.resonance() - fr) <= kDistinctResonance * fr) {
      std::ostringstream os;
      os << "spur branch (" << to_string(spur.label.kind) << ") resonates at the main resonance " << fr << " Hz";
      throw Error(ErrorCategory::domain, os.str());
    }
  }
}

ResonatorModel make_resonator(double c0, MotionalBranch main, std::vector<MotionalBranch> spurs, double r0,
                              double rs) {
  ResonatorModel m{c0, r0, rs, main, std::move(spurs)};
  m.main.label = {BranchKind::main, 0};
  m.validate();
  return m;
}

ResonancePair resonance_frequencies(const ResonatorModel& model) {
  const double fr = model.main.resonance();
  return {fr, fr * std::sqrt(1.0 + model.main.cm / model.c0)};
}

double coupling_from_frequencies(double fr, double fa) {
  if (!(fr > 0.0) || !(fr < fa)) throw Error(ErrorCategory::domain, "coupling requires 0 < fr < fa");
  const double ratio = fr / fa;
  return kPi * kPi / 8.0 * (1.0 - ratio * ratio);
}

double capacitance_ratio_from_coupling(double k2) {
  const double x = 8.0 * k2 / (kPi * kPi);
  if (!(k2 >= 0.0) || !(x < 1.0)) throw Error(ErrorCategory::domain, "k2 must lie in [0, pi^2/8)");
  return 1.0 / (1.0 - x) - 1.0;
}

QualityFactor::QualityFactor(double value) : value_(value), bounded_(true) {}

double QualityFactor::value() const {
  if (!bounded_) throw Error(ErrorCategory::domain, "quality factor is unbounded");
  return value_;
}

QualityFactor quality_factor(const ResonatorModel& model) {
  const auto& b = model.main;
  if (b.rm == 0.0) return QualityFactor::unbounded();
  return QualityFactor(std::sqrt(b.lm / b.cm) / b.rm);
}

}  // namespace mbaw
