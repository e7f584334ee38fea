#pragma once

// Sign-change scanning and bracketed refinement of zeros of periodic
// scalar functions.

#include <boost/math/tools/toms748_solve.hpp>

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <vector>

namespace asym {

struct Bracket {
  double a, b;    // f(a) and f(b) have opposite signs, a < b
  double fa, fb;
};

/// Brackets of sign changes of f sampled on n uniform points of [0, 2π).
/// The wrap-around interval [t_{n-1}, 2π) is included.
inline std::vector<Bracket> scan_sign_changes(const std::function<double(double)>& f, std::size_t n) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = f(two_pi * double(i) / double(n));
  std::vector<Bracket> out;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = v[i], b = v[(i + 1) % n];
    if ((a < 0) != (b < 0)) {
      out.push_back({two_pi * double(i) / double(n), two_pi * double(i + 1) / double(n), a, b});
    }
  }
  return out;
}

/// Refine a bracketed zero to |b - a| <= tol.
inline double refine_root(const std::function<double(double)>& f, Bracket br, double tol = 1e-12) {
  if (br.fa == 0.0) return br.a;
  if (br.fb == 0.0) return br.b;
  std::uintmax_t iters = 200;
  auto stop = [tol](double a, double b) { return std::abs(b - a) <= tol; };
  auto [lo, hi] = boost::math::tools::toms748_solve(f, br.a, br.b, br.fa, br.fb, stop, iters);
  return 0.5 * (lo + hi);
}

/// Wrap a parameter into [0, 2π).
inline double wrap_angle(double t) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  t = std::fmod(t, two_pi);
  return t < 0 ? t + two_pi : t;
}

/// Signed distance between parameters on the circle, in (-π, π].
inline double circular_diff(double s, double t) {
  constexpr double pi = std::numbers::pi;
  double d = std::remainder(s - t, 2.0 * pi);
  return d <= -pi ? d + 2.0 * pi : d;
}

}  // namespace asym
