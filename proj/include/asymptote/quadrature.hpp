#pragma once

#include "asymptote/error.hpp"
#include "asymptote/parallel.hpp"

#include <cmath>
#include <functional>
#include <numbers>

namespace asym {

struct QuadratureOptions {
  double tol = 1e-10;
  std::size_t initial_points = 64;
  std::size_t max_points = std::size_t{1} << 21;
};

/// Integral of a smooth 2π-periodic function over one period.  Trapezoid
/// rule on nested uniform grids; each doubling reuses the previous nodes.
/// Converged once two successive refinements change the value by less than
/// tol (relative to max(1, |I|)).
inline double integrate_periodic(const std::function<double(double)>& f, const QuadratureOptions& opt = {}) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  std::size_t n = opt.initial_points;
  double sum = parallel::sum(n, [&](std::size_t i) { return f(two_pi * double(i) / double(n)); });
  double prev = two_pi * sum / double(n);
  int agreements = 0;
  while (n < opt.max_points) {
    // new nodes sit at the midpoints of the current grid
    const std::size_t m = n;
    sum += parallel::sum(m, [&](std::size_t i) { return f(two_pi * (double(i) + 0.5) / double(m)); });
    n *= 2;
    const double cur = two_pi * sum / double(n);
    if (std::abs(cur - prev) < opt.tol * std::max(1.0, std::abs(cur))) {
      if (++agreements >= 2) return cur;
    } else {
      agreements = 0;
    }
    prev = cur;
  }
  throw Error(ErrorCode::quadrature_failure,
              "trapezoid refinement did not converge within " + std::to_string(opt.max_points) + " points");
}

/// Plain trapezoid sum on a fixed uniform grid of n points.
inline double trapezoid_periodic(const std::function<double(double)>& f, std::size_t n) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  return two_pi / double(n) * parallel::sum(n, [&](std::size_t i) { return f(two_pi * double(i) / double(n)); });
}

}  // namespace asym
