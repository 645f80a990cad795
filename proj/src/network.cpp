#include "mbaw/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace mbaw {

std::string to_string(Placement placement) { return placement == Placement::series ? "series" : "shunt"; }

Placement placement_from_string(const std::string& text) {
  if (text == "series") return Placement::series;
  if (text == "shunt") return Placement::shunt;
  throw Error(ErrorCategory::parse, "unknown stage placement '" + text + "'");
}

void LadderTopology::validate() const {
  if (stages.empty()) throw Error(ErrorCategory::domain, "ladder topology needs at least one stage");
  if (!(reference_impedance > 0.0)) throw Error(ErrorCategory::domain, "reference impedance must be positive");
  for (const auto& s : stages) s.resonator.validate();
}

void validate_grid(std::span<const double> grid) {
  if (grid.empty()) throw Error(ErrorCategory::domain, "frequency grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || !std::isfinite(grid[i]))
      throw Error(ErrorCategory::domain, "frequency grid values must be finite and positive");
    if (i > 0 && !(grid[i] > grid[i - 1]))
      throw Error(ErrorCategory::domain, "frequency grid must be strictly increasing (index " + std::to_string(i) + ")");
  }
}

std::vector<double> linear_grid(double start, double stop, std::size_t points) {
  if (!(start > 0.0) || !(start < stop) || points < 2)
    throw Error(ErrorCategory::domain, "grid needs 0 < start < stop and at least 2 points");
  std::vector<double> g(points);
  const double step = (stop - start) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) g[i] = start + step * static_cast<double>(i);
  g.back() = stop;
  return g;
}

std::vector<double> log_grid(double start, double stop, std::size_t points) {
  if (!(start > 0.0) || !(start < stop) || points < 2)
    throw Error(ErrorCategory::domain, "grid needs 0 < start < stop and at least 2 points");
  std::vector<double> g(points);
  const double ratio = std::log(stop / start) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) g[i] = start * std::exp(ratio * static_cast<double>(i));
  g.front() = start;
  g.back() = stop;
  return g;
}

void SParameterSet::validate() const {
  if (ports != 1 && ports != 2) throw Error(ErrorCategory::domain, "S-parameter set must have 1 or 2 ports");
  validate_grid(grid);
  if (data.size() != grid.size()) throw Error(ErrorCategory::domain, "S-parameter data length differs from grid");
  if (!(reference_impedance > 0.0)) throw Error(ErrorCategory::domain, "reference impedance must be positive");
}

SParameterSet cascade_sweep(const LadderTopology& topology, std::span<const double> grid) {
  topology.validate();
  validate_grid(grid);
  SParameterSet out;
  out.grid.assign(grid.begin(), grid.end());
  out.ports = 2;
  out.reference_impedance = topology.reference_impedance;
  out.data.reserve(grid.size());
  for (double f : grid) {
    // Left-to-right product in stage order keeps results bit-reproducible.
    Abcd<double> m = Abcd<double>::Identity();
    for (const auto& stage : topology.stages) m = (m * stage_abcd(stage, f)).eval();
    out.data.push_back(abcd_to_s(m, topology.reference_impedance));
  }
  return out;
}

SParameterSet one_port_sweep(const ResonatorModel& model, std::span<const double> grid, double reference_impedance) {
  model.validate();
  validate_grid(grid);
  if (!(reference_impedance > 0.0)) throw Error(ErrorCategory::domain, "reference impedance must be positive");
  SParameterSet out;
  out.grid.assign(grid.begin(), grid.end());
  out.ports = 1;
  out.reference_impedance = reference_impedance;
  out.data.reserve(grid.size());
  for (double f : grid) {
    const std::complex<double> z = 1.0 / admittance(model, f);
    SMatrix s = SMatrix::Zero();
    s(0, 0) = (z - reference_impedance) / (z + reference_impedance);
    out.data.push_back(s);
  }
  return out;
}

namespace {

double to_db(std::complex<double> s) {
  const double m = std::abs(s);
  return m > 0.0 ? 20.0 * std::log10(m) : -std::numeric_limits<double>::infinity();
}

// Abscissa where the dB trace crosses `level` between points i and j.
// Linear in dB; a -inf neighbour pins the crossing to the finite point.
double crossing(const std::vector<double>& f, const std::vector<double>& db, std::size_t inside, std::size_t outside,
                double level) {
  if (!std::isfinite(db[outside])) return f[inside];
  const double t = (db[inside] - level) / (db[inside] - db[outside]);
  return f[inside] + t * (f[outside] - f[inside]);
}

struct Run {
  std::size_t first, last;
};

}  // namespace

FilterMetrics filter_metrics(const SParameterSet& sparams, const MetricsOptions& options) {
  sparams.validate();
  if (sparams.ports != 2) throw Error(ErrorCategory::precondition, "filter metrics need a 2-port set");
  const auto& f = sparams.grid;
  const std::size_t n = f.size();
  std::vector<double> db(n);
  for (std::size_t i = 0; i < n; ++i) db[i] = to_db(sparams.s21(i));

  std::size_t lo = 0, hi = n - 1;
  if (options.passband_hint) {
    const auto w = *options.passband_hint;
    if (!(w.lo < w.hi)) throw Error(ErrorCategory::domain, "passband hint needs lo < hi");
    lo = static_cast<std::size_t>(std::lower_bound(f.begin(), f.end(), w.lo) - f.begin());
    const auto up = std::upper_bound(f.begin(), f.end(), w.hi) - f.begin();
    if (up == 0 || lo >= static_cast<std::size_t>(up))
      throw Error(ErrorCategory::extraction, "passband hint window contains no grid points");
    hi = static_cast<std::size_t>(up) - 1;
  }
  std::size_t peak = lo;
  for (std::size_t i = lo; i <= hi; ++i)
    if (db[i] > db[peak]) peak = i;
  if (!std::isfinite(db[peak])) throw Error(ErrorCategory::extraction, "no transmission in the search window");
  const double level = db[peak] - options.level_db;

  std::vector<Run> runs;
  for (std::size_t i = 0; i < n;) {
    if (db[i] >= level) {
      std::size_t j = i;
      while (j + 1 < n && db[j + 1] >= level) ++j;
      runs.push_back({i, j});
      i = j + 1;
    } else {
      ++i;
    }
  }
  if (!options.passband_hint && runs.size() > 1) {
    std::ostringstream os;
    os << runs.size() << " disjoint passbands above the " << options.level_db << " dB level; pass a hint window. candidates:";
    for (const auto& r : runs) os << " [" << f[r.first] << ", " << f[r.last] << "] Hz";
    throw Error(ErrorCategory::ambiguity, os.str());
  }
  const auto run = std::find_if(runs.begin(), runs.end(), [&](const Run& r) { return r.first <= peak && peak <= r.last; });
  if (run == runs.end()) throw Error(ErrorCategory::extraction, "no contiguous passband around the peak");
  if (run->first == 0 || run->last == n - 1)
    throw Error(ErrorCategory::extraction, "passband edge lies outside the frequency grid");

  FilterMetrics m;
  m.f_lower = crossing(f, db, run->first, run->first - 1, level);
  m.f_upper = crossing(f, db, run->last, run->last + 1, level);
  m.bw3db = m.f_upper - m.f_lower;
  if (!(m.bw3db > 0.0)) throw Error(ErrorCategory::extraction, "degenerate passband width");
  m.fc = options.center == CenterDefinition::arithmetic ? 0.5 * (m.f_lower + m.f_upper)
                                                         : std::sqrt(m.f_lower * m.f_upper);
  m.fbw = m.bw3db / m.fc;
  m.il_db = std::max(0.0, -db[peak]);
  return m;
}

double passivity_margin(const SMatrix& s, int ports) {
  if (ports == 1) return 1.0 - std::norm(s(0, 0));
  const Eigen::Matrix2cd m = Eigen::Matrix2cd::Identity() - s.adjoint() * s;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

}  // namespace mbaw
