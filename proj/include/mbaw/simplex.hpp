#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <functional>
#include <numeric>
#include <vector>

namespace mbaw {

struct SimplexOptions {
  int max_evaluations = 2000;
  double diameter_tolerance = 1e-6;
  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;
};

struct SimplexResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;  // diameter criterion met before the budget ran out
};

/// Nelder-Mead on an explicit starting simplex (dimension + 1 vertices).
/// Ties in the vertex ordering keep the lower index, so runs are
/// reproducible bit for bit.
template <typename Objective>
SimplexResult nelder_mead(Objective&& objective, std::vector<Eigen::VectorXd> simplex, const SimplexOptions& options = {}) {
  const std::size_t n = simplex.size();
  std::vector<double> values(n);
  SimplexResult result;
  auto eval = [&](const Eigen::VectorXd& x) {
    ++result.evaluations;
    return objective(x);
  };
  for (std::size_t i = 0; i < n; ++i) values[i] = eval(simplex[i]);

  std::vector<std::size_t> order(n);
  auto sort_vertices = [&] {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<Eigen::VectorXd> s(n);
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = simplex[order[i]];
      v[i] = values[order[i]];
    }
    simplex = std::move(s);
    values = std::move(v);
  };
  auto diameter = [&] {
    double d = 0.0;
    for (std::size_t i = 1; i < n; ++i) d = std::max(d, (simplex[i] - simplex[0]).lpNorm<Eigen::Infinity>());
    return d;
  };

  sort_vertices();
  while (result.evaluations < options.max_evaluations) {
    if (diameter() < options.diameter_tolerance) {
      result.converged = true;
      break;
    }
    const std::size_t worst = n - 1;
    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(simplex[0].size());
    for (std::size_t i = 0; i < worst; ++i) centroid += simplex[i];
    centroid /= static_cast<double>(worst);

    const Eigen::VectorXd reflected = centroid + options.reflection * (centroid - simplex[worst]);
    const double fr = eval(reflected);
    if (fr < values[0]) {
      const Eigen::VectorXd expanded = centroid + options.expansion * (reflected - centroid);
      const double fe = eval(expanded);
      if (fe < fr) {
        simplex[worst] = expanded;
        values[worst] = fe;
      } else {
        simplex[worst] = reflected;
        values[worst] = fr;
      }
    } else if (fr < values[worst - 1]) {
      simplex[worst] = reflected;
      values[worst] = fr;
    } else {
      const bool outside = fr < values[worst];
      const Eigen::VectorXd contracted = outside ? Eigen::VectorXd(centroid + options.contraction * (reflected - centroid))
                                                 : Eigen::VectorXd(centroid + options.contraction * (simplex[worst] - centroid));
      const double fc = eval(contracted);
      if (fc < (outside ? fr : values[worst])) {
        simplex[worst] = contracted;
        values[worst] = fc;
      } else {
        for (std::size_t i = 1; i < n; ++i) {
          simplex[i] = simplex[0] + options.shrink * (simplex[i] - simplex[0]);
          values[i] = eval(simplex[i]);
        }
      }
    }
    sort_vertices();
  }
  if (!result.converged && diameter() < options.diameter_tolerance) result.converged = true;
  result.x = simplex[0];
  result.value = values[0];
  return result;
}

}  // namespace mbaw
