#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "mbaw/resonator.hpp"

namespace mbaw {

template <typename Scalar>
using Abcd = Eigen::Matrix<std::complex<Scalar>, 2, 2>;

using SMatrix = Eigen::Matrix2cd;

enum class Placement { series, shunt };

std::string to_string(Placement placement);
Placement placement_from_string(const std::string& text);

struct LadderStage {
  Placement placement = Placement::series;
  ResonatorModel resonator;

  friend bool operator==(const LadderStage&, const LadderStage&) = default;
};

struct LadderTopology {
  std::vector<LadderStage> stages;
  double reference_impedance = 50.0;

  void validate() const;

  friend bool operator==(const LadderTopology&, const LadderTopology&) = default;
};

/// Frequency grid plus one S-matrix per point. One-port sets only use the
/// (0,0) entry; the rest of the matrix is zero.
struct SParameterSet {
  std::vector<double> grid;  // Hz, strictly increasing
  int ports = 2;
  std::vector<SMatrix> data;
  double reference_impedance = 50.0;

  std::size_t size() const { return grid.size(); }
  std::complex<double> s11(std::size_t i) const { return data[i](0, 0); }
  std::complex<double> s21(std::size_t i) const { return data[i](1, 0); }

  void validate() const;
};

struct FilterMetrics {
  double fc = 0.0;     // Hz
  double il_db = 0.0;  // dB, >= 0
  double bw3db = 0.0;  // Hz
  double fbw = 0.0;    // bw3db / fc
  double f_lower = 0.0;
  double f_upper = 0.0;
};

/// Strictly increasing grid check shared by sweeps and file readers.
void validate_grid(std::span<const double> grid);

std::vector<double> linear_grid(double start, double stop, std::size_t points);
std::vector<double> log_grid(double start, double stop, std::size_t points);

template <typename Scalar>
Abcd<Scalar> series_abcd(std::complex<Scalar> z) {
  Abcd<Scalar> m;
  m << Scalar(1), z, Scalar(0), Scalar(1);
  return m;
}

template <typename Scalar>
Abcd<Scalar> shunt_abcd(std::complex<Scalar> y) {
  Abcd<Scalar> m;
  m << Scalar(1), Scalar(0), y, Scalar(1);
  return m;
}

template <typename Scalar = double>
Abcd<Scalar> stage_abcd(const LadderStage& stage, Scalar f) {
  const auto y = admittance<Scalar>(stage.resonator, f);
  return stage.placement == Placement::series ? series_abcd<Scalar>(Scalar(1) / y) : shunt_abcd<Scalar>(y);
}

/// Standard ABCD -> S conversion for equal real port impedances. S12 is set
/// equal to S21, which holds exactly for the reciprocal elements used here.
template <typename Scalar>
Eigen::Matrix<std::complex<Scalar>, 2, 2> abcd_to_s(const Abcd<Scalar>& m, Scalar z0) {
  const auto a = m(0, 0), b = m(0, 1) / z0, c = m(1, 0) * z0, d = m(1, 1);
  const auto denom = a + b + c + d;
  Eigen::Matrix<std::complex<Scalar>, 2, 2> s;
  s(0, 0) = (a + b - c - d) / denom;
  s(1, 0) = Scalar(2) / denom;
  s(0, 1) = s(1, 0);
  s(1, 1) = (-a + b - c + d) / denom;
  return s;
}

/// Cascaded two-port response of a ladder over the grid.
SParameterSet cascade_sweep(const LadderTopology& topology, std::span<const double> grid);

/// One-port reflection S11 = (Z - Z0)/(Z + Z0) of a single resonator.
SParameterSet one_port_sweep(const ResonatorModel& model, std::span<const double> grid,
                             double reference_impedance = 50.0);

enum class CenterDefinition { arithmetic, geometric };

struct FrequencyWindow {
  double lo = 0.0;
  double hi = 0.0;
};

struct MetricsOptions {
  std::optional<FrequencyWindow> passband_hint;
  CenterDefinition center = CenterDefinition::arithmetic;
  double level_db = 3.0;
};

FilterMetrics filter_metrics(const SParameterSet& sparams, const MetricsOptions& options = {});

/// Smallest eigenvalue of I - S^H S; >= 0 for a passive network.
double passivity_margin(const SMatrix& s, int ports = 2);

}  // namespace mbaw
