#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "mbaw/network.hpp"
#include "mbaw/resonator.hpp"

namespace mbaw {

/// Bode-Q versus frequency.
struct QCurve {
  std::vector<double> grid;
  std::vector<QualityFactor> q;  // unbounded where 1 - |S11|^2 underflows
  double qmax = 0.0;
  double f_at_qmax = 0.0;
};

struct BodeQOptions {
  /// Restrict the qmax search to this window; the curve itself covers the
  /// whole grid. An ideal mBVD with lossless c0 has a Bode-Q that climbs
  /// away from resonance, so resonance-local qmax needs a window.
  std::optional<FrequencyWindow> qmax_window;
  /// Wrapped phase steps above this magnitude mean the grid under-samples
  /// the phase swing.
  double max_phase_step = 1.5707963267948966;
  /// Centered moving-average length applied to the group delay; 1 = none.
  int smoothing = 1;
};

/// Q(w) = w tau |S11| / (1 - |S11|^2), tau = -d(arg S11)/dw on the unwrapped
/// phase (central differences, one-sided at the ends).
QCurve bode_q(const SParameterSet& s11_set, const BodeQOptions& options = {});

struct AdmittanceSweep {
  std::vector<double> grid;
  std::vector<std::complex<double>> y;
};

AdmittanceSweep admittance_sweep(const ResonatorModel& model, std::span<const double> grid);
AdmittanceSweep admittance_from_s11(const SParameterSet& s11_set);

/// |Y| argmax / argmin, each refined by a three-point parabola (on 1/|Y|^2
/// at the maximum, |Y|^2 at the minimum).
ResonancePair extract_fr_fa(const AdmittanceSweep& sweep);

/// fr (1 -/+ w) around the |Y| peak. Default qmax window for resonators:
/// Bode-Q of an mBVD with lossless c0 rises away from resonance, so the
/// resonance value needs a local search. Only fr must be bracketed.
FrequencyWindow resonance_window(const AdmittanceSweep& sweep, double relative_half_width = 0.005);

struct FitOptions {
  int max_iterations = 500;
  double step_tolerance = 1e-10;      // max relative parameter change
  double residual_tolerance = 1e-8;   // relative complex RMS
  /// Starting point; when unset it is estimated from the data.
  std::optional<ResonatorModel> initial;
};

struct FitReport {
  ResonatorModel model;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Main-branch mBVD fit (rs, r0, rm, lm, cm, c0) by damped least squares on
/// log-parameters, minimizing the relative complex admittance misfit.
FitReport fit_mbvd(const AdmittanceSweep& sweep, const FitOptions& options = {});
FitReport fit_mbvd(const SParameterSet& s11_set, const FitOptions& options = {});

/// Relative complex RMS of the model admittance against the sweep.
double admittance_residual(const ResonatorModel& model, const AdmittanceSweep& sweep);

struct DelayLineRun {
  double gap_wavelengths = 0.0;
  double s21_magnitude = 0.0;  // linear, (0, 1]
};

struct DelayLineDataset {
  std::vector<DelayLineRun> runs;
  std::optional<double> damping_input;  // material damping used to generate the data, if known
};

struct DelayLineFit {
  double delta = 0.0;      // amplitude decay per radian of propagation
  double amplitude = 0.0;  // A0, zero-gap transmission
};

/// Least squares on ln|S21| = ln A0 - delta * 2 pi gap.
DelayLineFit fit_delay_line(const DelayLineDataset& dataset);
double fit_delay_line_loss(const DelayLineDataset& dataset);

/// k^2 * Qmax.
double figure_of_merit(double k2, double qmax);

}  // namespace mbaw
