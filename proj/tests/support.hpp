#pragma once
// Helpers shared by the test binaries.

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "mbaw/error.hpp"
#include "mbaw/resonator.hpp"

namespace mbaw::testing {

/// Category of the Error thrown by fn; `usage` is never raised by the
/// library, so it doubles as "nothing thrown".
template <typename Fn>
ErrorCategory category_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.category();
  }
  return ErrorCategory::usage;
}

inline std::string data_path(const std::string& name) { return std::string(MBAW_DATA_DIR) + "/" + name; }

/// Main-branch model with the requested fr, Q and cm/c0.
inline ResonatorModel model_for(double fr, double q, double ratio, double c0 = 1e-12, double r0 = 0.0, double rs = 0.0) {
  const double cm = ratio * c0;
  const double w = 2.0 * std::numbers::pi * fr;
  const double lm = 1.0 / (w * w * cm);
  return make_resonator(c0, {std::sqrt(lm / cm) / q, lm, cm, {}}, {}, r0, rs);
}

/// Model family used by the randomized suites: fr in [1, 6] GHz,
/// Q in [500, 5000], cm/c0 in [0.02, 0.3].
struct ModelFamily {
  std::mt19937_64 rng;
  std::uniform_real_distribution<double> u{0.0, 1.0};
  explicit ModelFamily(std::uint64_t seed) : rng(seed) {}

  double uniform(double lo, double hi) { return lo + (hi - lo) * u(rng); }

  ResonatorModel draw(bool parasitics) {
    const double fr = uniform(1e9, 6e9), q = uniform(500, 5000), ratio = uniform(0.02, 0.3);
    const double c0 = uniform(0.5e-12, 2e-12);
    const double r0 = parasitics ? uniform(0.02, 0.5) : 0.0;
    const double rs = parasitics ? uniform(0.1, 1.0) : 0.0;
    return model_for(fr, q, ratio, c0, r0, rs);
  }
};

}  // namespace mbaw::testing
