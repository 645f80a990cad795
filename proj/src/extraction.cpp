#include "mbaw/extraction.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>

namespace mbaw {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kUnboundedFloor = 1e-12;

// First derivative on a non-uniform grid: second-order central stencil in
// the interior, one-sided at the ends.
std::vector<double> derivative(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  std::vector<double> d(n);
  d.front() = (y[1] - y[0]) / (x[1] - x[0]);
  d.back() = (y[n - 1] - y[n - 2]) / (x[n - 1] - x[n - 2]);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double hm = x[i] - x[i - 1], hp = x[i + 1] - x[i];
    d[i] = (hm * hm * y[i + 1] - hp * hp * y[i - 1] + (hp * hp - hm * hm) * y[i]) / (hm * hp * (hm + hp));
  }
  return d;
}

std::vector<double> moving_average(const std::vector<double>& v, int window) {
  if (window <= 1) return v;
  const auto half = static_cast<std::ptrdiff_t>(window / 2);
  const auto n = static_cast<std::ptrdiff_t>(v.size());
  std::vector<double> out(v.size());
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto a = std::max<std::ptrdiff_t>(0, i - half), b = std::min(n - 1, i + half);
    double s = 0.0;
    for (auto j = a; j <= b; ++j) s += v[static_cast<std::size_t>(j)];
    out[static_cast<std::size_t>(i)] = s / static_cast<double>(b - a + 1);
  }
  return out;
}

// Vertex of the parabola through three points with arbitrary spacing.
double parabola_vertex(double x0, double y0, double x1, double y1, double x2, double y2) {
  const double a = (x1 - x0) * (y1 - y2), b = (x1 - x2) * (y1 - y0);
  const double denom = a - b;
  if (denom == 0.0) return x1;
  const double v = x1 - 0.5 * ((x1 - x0) * a - (x1 - x2) * b) / denom;
  return std::clamp(v, x0, x2);
}

}  // namespace

QCurve bode_q(const SParameterSet& s11_set, const BodeQOptions& options) {
  s11_set.validate();
  if (s11_set.ports != 1) throw Error(ErrorCategory::precondition, "Bode-Q needs a one-port set");
  const std::size_t n = s11_set.size();
  if (n < 3) throw Error(ErrorCategory::precondition, "Bode-Q needs at least 3 points");

  std::vector<double> omega(n), phase(n), mag(n);
  for (std::size_t i = 0; i < n; ++i) {
    omega[i] = kTwoPi * s11_set.grid[i];
    mag[i] = std::abs(s11_set.s11(i));
    phase[i] = std::arg(s11_set.s11(i));
  }
  for (std::size_t i = 1; i < n; ++i) {
    double step = phase[i] - phase[i - 1];
    step = std::remainder(step, kTwoPi);
    if (std::abs(step) > options.max_phase_step) {
      std::ostringstream os;
      os << "S11 phase jumps " << step << " rad between " << s11_set.grid[i - 1] << " and " << s11_set.grid[i]
         << " Hz; grid too coarse to unwrap";
      throw Error(ErrorCategory::grid, os.str());
    }
    phase[i] = phase[i - 1] + step;
  }
  auto tau = derivative(omega, phase);
  for (auto& t : tau) t = -t;
  tau = moving_average(tau, options.smoothing);

  QCurve curve;
  curve.grid = s11_set.grid;
  curve.q.reserve(n);
  bool found = false;
  for (std::size_t i = 0; i < n; ++i) {
    const double loss = 1.0 - mag[i] * mag[i];
    if (loss < kUnboundedFloor) {
      curve.q.push_back(QualityFactor::unbounded());
      continue;
    }
    const double q = omega[i] * tau[i] * mag[i] / loss;
    curve.q.emplace_back(q);
    const double f = curve.grid[i];
    if (options.qmax_window && (f < options.qmax_window->lo || f > options.qmax_window->hi)) continue;
    if (!found || q > curve.qmax) {
      curve.qmax = q;
      curve.f_at_qmax = f;
      found = true;
    }
  }
  if (!found) throw Error(ErrorCategory::extraction, "Bode-Q is unbounded everywhere in the search range; qmax undefined");
  return curve;
}

AdmittanceSweep admittance_sweep(const ResonatorModel& model, std::span<const double> grid) {
  validate_grid(grid);
  AdmittanceSweep s;
  s.grid.assign(grid.begin(), grid.end());
  s.y.reserve(grid.size());
  for (double f : grid) s.y.push_back(admittance(model, f));
  return s;
}

AdmittanceSweep admittance_from_s11(const SParameterSet& s11_set) {
  s11_set.validate();
  if (s11_set.ports != 1) throw Error(ErrorCategory::precondition, "admittance conversion needs a one-port set");
  AdmittanceSweep s;
  s.grid = s11_set.grid;
  s.y.reserve(s.grid.size());
  for (std::size_t i = 0; i < s11_set.size(); ++i) {
    const auto g = s11_set.s11(i);
    s.y.push_back((1.0 - g) / ((1.0 + g) * s11_set.reference_impedance));
  }
  return s;
}

ResonancePair extract_fr_fa(const AdmittanceSweep& sweep) {
  validate_grid(sweep.grid);
  const std::size_t n = sweep.grid.size();
  if (sweep.y.size() != n) throw Error(ErrorCategory::domain, "admittance sweep length differs from grid");
  if (n < 3) throw Error(ErrorCategory::bracketing, "need at least 3 points to bracket extrema");
  std::vector<double> mag2(n);
  for (std::size_t i = 0; i < n; ++i) mag2[i] = std::norm(sweep.y[i]);
  const auto imax = static_cast<std::size_t>(std::max_element(mag2.begin(), mag2.end()) - mag2.begin());
  const auto imin = static_cast<std::size_t>(std::min_element(mag2.begin(), mag2.end()) - mag2.begin());
  // Near fr |Z|^2 and near fa |Y|^2 are locally quadratic in f for an RLC
  // resonance, lossless or not, so the parabola vertex is nearly exact.
  auto refine = [&](std::size_t i, const char* what, auto&& value) {
    if (i == 0 || i == n - 1) {
      std::ostringstream os;
      os << "|Y| " << what << " at the grid edge (" << sweep.grid[i] << " Hz); sweep does not bracket it";
      throw Error(ErrorCategory::bracketing, os.str());
    }
    const double a = value(i - 1), b = value(i), c = value(i + 1);
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c)) return sweep.grid[i];
    return parabola_vertex(sweep.grid[i - 1], a, sweep.grid[i], b, sweep.grid[i + 1], c);
  };
  return {refine(imax, "maximum", [&](std::size_t i) { return 1.0 / mag2[i]; }),
          refine(imin, "minimum", [&](std::size_t i) { return mag2[i]; })};
}

FrequencyWindow resonance_window(const AdmittanceSweep& sweep, double relative_half_width) {
  validate_grid(sweep.grid);
  const std::size_t n = sweep.grid.size();
  if (sweep.y.size() != n) throw Error(ErrorCategory::domain, "admittance sweep length differs from grid");
  if (!(relative_half_width > 0.0 && relative_half_width < 1.0))
    throw Error(ErrorCategory::domain, "resonance window half-width must lie in (0, 1)");
  std::size_t imax = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (std::abs(sweep.y[i]) > std::abs(sweep.y[imax])) imax = i;
  if (imax == 0 || imax == n - 1)
    throw Error(ErrorCategory::bracketing, "|Y| maximum at the grid edge; sweep does not bracket fr");
  auto z2 = [&](std::size_t i) { return 1.0 / std::norm(sweep.y[i]); };
  const double fr =
      parabola_vertex(sweep.grid[imax - 1], z2(imax - 1), sweep.grid[imax], z2(imax), sweep.grid[imax + 1], z2(imax + 1));
  return {fr * (1.0 - relative_half_width), fr * (1.0 + relative_half_width)};
}

namespace {

// Log-parameter vector ordering.
enum Param { kRs, kR0, kRm, kLm, kCm, kC0, kParams };

using ParamVector = Eigen::Matrix<double, kParams, 1>;

ResonatorModel model_from(const ParamVector& logp) {
  ResonatorModel m;
  m.rs = std::exp(logp[kRs]);
  m.r0 = std::exp(logp[kR0]);
  m.main.rm = std::exp(logp[kRm]);
  m.main.lm = std::exp(logp[kLm]);
  m.main.cm = std::exp(logp[kCm]);
  m.c0 = std::exp(logp[kC0]);
  return m;
}

ParamVector to_params(const ResonatorModel& m) {
  if (!(m.rs > 0.0 && m.r0 > 0.0 && m.main.rm > 0.0 && m.main.lm > 0.0 && m.main.cm > 0.0 && m.c0 > 0.0))
    throw Error(ErrorCategory::domain, "fit start model needs all six parameters positive");
  ParamVector p;
  p[kRs] = std::log(m.rs);
  p[kR0] = std::log(m.r0);
  p[kRm] = std::log(m.main.rm);
  p[kLm] = std::log(m.main.lm);
  p[kCm] = std::log(m.main.cm);
  p[kC0] = std::log(m.c0);
  return p;
}

// Residual (re, im interleaved) and Jacobian with respect to log-parameters.
void evaluate(const ParamVector& logp, const AdmittanceSweep& sweep, Eigen::VectorXd& r, Eigen::MatrixXd* jac) {
  using C = std::complex<double>;
  const ResonatorModel m = model_from(logp);
  const std::size_t n = sweep.grid.size();
  r.resize(static_cast<Eigen::Index>(2 * n));
  if (jac) jac->resize(static_cast<Eigen::Index>(2 * n), kParams);
  const C j(0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = kTwoPi * sweep.grid[i];
    const C jwc0 = j * w * m.c0;
    const C den0 = 1.0 + jwc0 * m.r0;
    const C y0 = jwc0 / den0;
    const C zm = m.main.rm + j * w * m.main.lm + 1.0 / (j * w * m.main.cm);
    const C ym = 1.0 / zm;
    const C yc = y0 + ym;
    const C y = yc / (1.0 + m.rs * yc);
    const double scale = 1.0 / std::abs(sweep.y[i]);
    const C res = (y - sweep.y[i]) * scale;
    const auto row = static_cast<Eigen::Index>(2 * i);
    r[row] = res.real();
    r[row + 1] = res.imag();
    if (!jac) continue;
    const C dy_dyc = (y * y) / (yc * yc);
    std::array<C, kParams> d;
    d[kRs] = -y * y * m.rs;
    d[kR0] = dy_dyc * (-y0 * y0) * m.r0;
    d[kC0] = dy_dyc * (j * w / (den0 * den0)) * m.c0;
    const C dym_dzm = -ym * ym;
    d[kRm] = dy_dyc * dym_dzm * m.main.rm;
    d[kLm] = dy_dyc * dym_dzm * (j * w) * m.main.lm;
    d[kCm] = dy_dyc * dym_dzm * (-1.0 / (j * w * m.main.cm * m.main.cm)) * m.main.cm;
    for (int k = 0; k < kParams; ++k) {
      (*jac)(row, k) = d[static_cast<std::size_t>(k)].real() * scale;
      (*jac)(row + 1, k) = d[static_cast<std::size_t>(k)].imag() * scale;
    }
  }
}

double rms(const Eigen::VectorXd& r) { return std::sqrt(r.squaredNorm() / static_cast<double>(r.size() / 2)); }

ParamVector initial_guess(const AdmittanceSweep& sweep) {
  ResonancePair rf;
  try {
    rf = extract_fr_fa(sweep);
  } catch (const Error& e) {
    throw Error(ErrorCategory::precondition, std::string("mBVD fit needs data bracketing fr and fa: ") + e.what());
  }
  if (!(rf.fr < rf.fa))
    throw Error(ErrorCategory::precondition, "mBVD fit needs the |Y| maximum (fr) below the minimum (fa)");
  const double ratio2 = (rf.fa / rf.fr) * (rf.fa / rf.fr);

  // Lowest point sits below fr; remove the motional contribution expected
  // from the fa/fr ratio before reading c0 off the susceptance slope.
  const double f_low = sweep.grid.front();
  const double w_low = kTwoPi * f_low;
  const double slope = sweep.y.front().imag() / w_low;
  const double x = f_low / rf.fr;
  double c0 = slope;
  if (x < 0.95) c0 = slope / (1.0 + (ratio2 - 1.0) / (1.0 - x * x));
  if (!(c0 > 0.0)) throw Error(ErrorCategory::precondition, "off-resonance susceptance is not capacitive");

  const double cm = c0 * (ratio2 - 1.0);
  const double wr = kTwoPi * rf.fr;
  const double lm = 1.0 / (wr * wr * cm);
  double gmax = 0.0;
  for (const auto& y : sweep.y) gmax = std::max(gmax, y.real());
  if (!(gmax > 0.0)) throw Error(ErrorCategory::precondition, "no conductance peak in the data");
  const double rm = 1.0 / gmax;

  ParamVector p;
  p[kRs] = std::log(0.1 * rm);
  p[kR0] = std::log(0.1 * rm);
  p[kRm] = std::log(rm);
  p[kLm] = std::log(lm);
  p[kCm] = std::log(cm);
  p[kC0] = std::log(c0);
  return p;
}

FitReport refine(const AdmittanceSweep& sweep, const FitOptions& options, ParamVector p) {
  Eigen::VectorXd r, r_trial;
  Eigen::MatrixXd jac;
  evaluate(p, sweep, r, &jac);
  double cost = r.squaredNorm();

  // Levenberg-Marquardt with Nielsen's damping update.
  Eigen::Matrix<double, kParams, kParams> jtj = jac.transpose() * jac;
  ParamVector g = jac.transpose() * r;
  double mu = 1e-3 * jtj.diagonal().maxCoeff();
  double nu = 2.0;

  FitReport report;
  for (int it = 0; it < options.max_iterations; ++it) {
    report.iterations = it + 1;
    if (rms(r) < options.residual_tolerance) {
      report.converged = true;
      break;
    }
    Eigen::Matrix<double, kParams, kParams> a = jtj;
    a.diagonal() += mu * jtj.diagonal().cwiseMax(1e-300);
    const ParamVector step = a.ldlt().solve(-g);
    const ParamVector trial = p + step;
    evaluate(trial, sweep, r_trial, nullptr);
    const double trial_cost = r_trial.squaredNorm();
    const double predicted = step.dot(mu * jtj.diagonal().cwiseMax(1e-300).cwiseProduct(step) - g);
    const double rho = predicted > 0.0 ? (cost - trial_cost) / predicted : -1.0;
    if (std::isfinite(trial_cost) && trial_cost < cost) {
      p = trial;
      evaluate(p, sweep, r, &jac);
      cost = r.squaredNorm();
      jtj = jac.transpose() * jac;
      g = jac.transpose() * r;
      mu *= std::max(1.0 / 3.0, 1.0 - std::pow(2.0 * std::clamp(rho, 0.0, 1.0) - 1.0, 3));
      nu = 2.0;
      if (step.cwiseAbs().maxCoeff() < options.step_tolerance) {
        report.converged = true;
        break;
      }
    } else {
      mu *= nu;
      nu *= 2.0;
      if (!std::isfinite(mu) || mu > 1e300) break;
    }
  }
  report.model = model_from(p);
  report.model.main.label = {BranchKind::main, 0};
  report.residual = rms(r);
  if (!report.converged && report.residual < options.residual_tolerance) report.converged = true;
  return report;
}

// Resistances are poorly separated by the reactive initial estimate: the
// conductance peak only fixes rs + rm, and r0 can collapse toward zero in
// log space. A coarse scan over the split and over r0 picks the start basins.
std::vector<ParamVector> scan_starts(const AdmittanceSweep& sweep, const ParamVector& guess, std::size_t keep) {
  const double r_total = std::exp(guess[kRm]);
  std::vector<std::pair<double, ParamVector>> scored;
  Eigen::VectorXd r;
  for (const double split : {0.02, 0.1, 0.25, 0.4, 0.55, 0.7, 0.85, 0.95}) {
    for (int k = 0; k < 10; ++k) {
      ParamVector p = guess;
      p[kRs] = std::log(split * r_total);
      p[kRm] = std::log((1.0 - split) * r_total);
      p[kR0] = std::log(r_total * std::pow(10.0, -2.0 + 3.0 * k / 9.0));
      evaluate(p, sweep, r, nullptr);
      const double c = r.squaredNorm();
      if (std::isfinite(c)) scored.emplace_back(c, p);
    }
  }
  std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<ParamVector> starts;
  for (std::size_t i = 0; i < std::min(keep, scored.size()); ++i) starts.push_back(scored[i].second);
  if (starts.empty()) starts.push_back(guess);
  return starts;
}

}  // namespace

double admittance_residual(const ResonatorModel& model, const AdmittanceSweep& sweep) {
  double s = 0.0;
  for (std::size_t i = 0; i < sweep.grid.size(); ++i) s += std::norm((admittance(model, sweep.grid[i]) - sweep.y[i]) / std::abs(sweep.y[i]));
  return std::sqrt(s / static_cast<double>(sweep.grid.size()));
}

FitReport fit_mbvd(const AdmittanceSweep& sweep, const FitOptions& options) {
  validate_grid(sweep.grid);
  if (sweep.y.size() != sweep.grid.size()) throw Error(ErrorCategory::domain, "admittance sweep length differs from grid");
  for (const auto& y : sweep.y)
    if (!(std::abs(y) > 0.0) || !std::isfinite(std::abs(y)))
      throw Error(ErrorCategory::precondition, "admittance data must be finite and non-zero");

  if (options.initial) return refine(sweep, options, to_params(*options.initial));
  FitReport best;
  bool have = false;
  for (const auto& start : scan_starts(sweep, initial_guess(sweep), 3)) {
    FitReport report = refine(sweep, options, start);
    if (!have || report.residual < best.residual) {
      best = report;
      have = true;
    }
    if (best.residual < options.residual_tolerance) break;
  }
  return best;
}

FitReport fit_mbvd(const SParameterSet& s11_set, const FitOptions& options) {
  return fit_mbvd(admittance_from_s11(s11_set), options);
}

DelayLineFit fit_delay_line(const DelayLineDataset& dataset) {
  const auto& runs = dataset.runs;
  if (runs.size() < 2) throw Error(ErrorCategory::rank, "delay-line fit needs at least 2 runs with distinct gaps");
  for (const auto& run : runs) {
    if (!(run.s21_magnitude > 0.0 && run.s21_magnitude <= 1.0))
      throw Error(ErrorCategory::domain, "delay-line |S21| must lie in (0, 1]");
    if (!(run.gap_wavelengths >= 0.0)) throw Error(ErrorCategory::domain, "delay-line gap must be non-negative");
  }
  const auto n = static_cast<double>(runs.size());
  double mx = 0.0, my = 0.0;
  for (const auto& run : runs) {
    mx += kTwoPi * run.gap_wavelengths;
    my += std::log(run.s21_magnitude);
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& run : runs) {
    const double dx = kTwoPi * run.gap_wavelengths - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(run.s21_magnitude) - my);
  }
  if (!(sxx > 0.0)) throw Error(ErrorCategory::rank, "delay-line gaps are all identical; slope is undetermined");
  const double slope = sxy / sxx;
  return {-slope, std::exp(my - slope * mx)};
}

double fit_delay_line_loss(const DelayLineDataset& dataset) { return fit_delay_line(dataset).delta; }

double figure_of_merit(double k2, double qmax) {
  if (!(k2 >= 0.0) || !(qmax >= 0.0)) throw Error(ErrorCategory::domain, "figure of merit needs non-negative k2 and qmax");
  return k2 * qmax;
}

}  // namespace mbaw
