#pragma once

#include "asymptote/curve.hpp"

#include <cmath>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

namespace asym::builtin {

inline ClosedCurve circle(double radius = 1.0) {
  return ClosedCurve(
      [radius](double t, int order) {
        Series s, c;
        sincos(Series::variable(t, order), s, c);
        return SVec3{radius * c, radius * s, Series(0.0, order)};
      },
      CurveKind::analytic_builtin, "circle", {{"radius", radius}});
}

struct TorusKnotParams {
  int p = 2;         // turns around the torus axis
  int q = 3;         // turns around the tube
  double R = 2.0;    // major radius
  double r = 0.5;    // tube radius
  double b = 0.0;    // tube-angle modulation: θ = q t + b sin(q t)
  double c = 0.0;    // axial-angle modulation: φ = p t + c sin(q t)
  double h = 1.0;    // handedness; −1 mirrors the knot through the xy-plane
};

/// ((R + r cos θ) cos φ, (R + r cos θ) sin φ, h r sin θ).  With b = c = 0 this
/// is the standard (p,q) torus knot; the modulation keeps the knot type but
/// reshapes torsion.
inline ClosedCurve torus_knot(const TorusKnotParams& k) {
  return ClosedCurve(
      [k](double t, int order) {
        const Series x = Series::variable(t, order);
        const Series sq = sin(double(k.q) * x);
        const Series theta = double(k.q) * x + k.b * sq;
        const Series phi = double(k.p) * x + k.c * sq;
        Series st, ct, sp, cp;
        sincos(theta, st, ct);
        sincos(phi, sp, cp);
        const Series rad = k.R + k.r * ct;
        return SVec3{rad * cp, rad * sp, (k.h * k.r) * st};
      },
      CurveKind::analytic_builtin, "torus-knot",
      {{"p", double(k.p)}, {"q", double(k.q)}, {"R", k.R}, {"r", k.r}, {"b", k.b}, {"c", k.c}, {"h", k.h}});
}

/// (2,3) torus knot reshaped so that its torsion keeps one sign (positive
/// for this handedness).
inline TorusKnotParams trefoil_params() { return {2, 3, 1.5, 0.5, 0.85, -0.35, -1.0}; }
/// (2,5) torus knot; the plain embedding already has one-signed torsion.
inline TorusKnotParams cinquefoil_params() { return {2, 5, 2.0, 0.5, 0.0, 0.0, -1.0}; }

/// The classical graph-type example:
///   Γ1 = (3 + sin t) cos(a cos t), Γ2 = (3 + sin t) sin(a cos t),
///   Γ3 = sin 2t + 46 cos t − 27 cos³t + 27/8 cos⁵t,   a = √(63/8).
inline ClosedCurve kovaleva() {
  return ClosedCurve(
      [](double t, int order) {
        const Series x = Series::variable(t, order);
        Series s, c;
        sincos(x, s, c);
        const Series rad = 3.0 + s;
        Series sa, ca;
        sincos(std::sqrt(63.0 / 8.0) * c, sa, ca);
        const Series c2 = c * c;
        const Series c3 = c2 * c;
        const Series z = sin(2.0 * x) + 46.0 * c - 27.0 * c3 + (27.0 / 8.0) * (c3 * c2);
        return SVec3{rad * ca, rad * sa, z};
      },
      CurveKind::analytic_builtin, "kovaleva", {});
}

/// Gerono lemniscate (sin t, sin t cos t) lifted by ε(cos t − cos 3t / 9).
/// Γ'' vanishes at t = 0 and t = π, so the space curve has two genuine
/// inflections there; the lift separates the two strands at the double point.
inline ClosedCurve figure_eight(double eps = 0.2) {
  return ClosedCurve(
      [eps](double t, int order) {
        const Series x = Series::variable(t, order);
        Series s, c;
        sincos(x, s, c);
        return SVec3{s, s * c, eps * (c - cos(3.0 * x) / 9.0)};
      },
      CurveKind::analytic_builtin, "figure-eight", {{"eps", eps}});
}

/// A curve whose view along e₃ winds three times with no inflections while
/// the torsion stays positive.  With θ = 3t the planar part has radius of
/// curvature ρ = 1 + γ cos(4t) in θ, and the height solves
/// h_θ = ρ g, g_θθ + g = ε + (1 + cos 4t)^N, so sign τ = sign(g_θθ + g) > 0.
/// ε is fixed by the closing condition ∫ ρ g dθ = 0.  Height scaled to [−1, 1].
inline ClosedCurve triple_winding(double gamma = 0.9, int N = 10) {
  if (!(gamma > 0 && gamma < 1) || N < 1 || N > 40)
    throw Error(ErrorCode::invalid_spec, "triple-winding needs 0 < gamma < 1 and 1 <= N <= 40");
  auto inv = [](int k) { return 1.0 / (1.0 - (k / 3.0) * (k / 3.0)); };  // (∂_θθ + 1)⁻¹ on cos(kt)
  auto binom = [](int n, int r) { return std::exp(std::lgamma(n + 1.0) - std::lgamma(r + 1.0) - std::lgamma(n - r + 1.0)); };
  // (1 + cos x)^N = Σ_j beta_j cos(jx)
  std::vector<double> beta(N + 1);
  for (int j = 0; j <= N; ++j) beta[j] = std::pow(2.0, -N) * binom(2 * N, N - j) * (j == 0 ? 1.0 : 2.0);
  const double eps = -beta[0] - 0.5 * beta[1] * gamma * inv(4);
  std::vector<double> g(N + 1);
  for (int j = 0; j <= N; ++j) g[j] = (beta[j] + (j == 0 ? eps : 0.0)) * inv(4 * j);
  // h_t = 3 ρ g as a cosine series in 4t
  std::vector<double> c(N + 2, 0.0);
  for (int j = 0; j <= N; ++j) {
    c[j] += 3.0 * g[j];
    c[j + 1] += 1.5 * gamma * g[j];
    c[j == 0 ? 1 : j - 1] += 1.5 * gamma * g[j];
  }
  std::vector<double> hk(N + 2, 0.0);
  for (int k = 1; k <= N + 1; ++k) hk[k] = c[k] / (4.0 * k);
  double hmax = 0.0;
  for (int i = 0; i < 4096; ++i) {
    double v = 0.0;
    for (int k = 1; k <= N + 1; ++k) v += hk[k] * std::sin(4.0 * k * kTwoPi * i / 4096.0);
    hmax = std::max(hmax, std::abs(v));
  }
  for (double& v : hk) v /= hmax;
  return ClosedCurve(
      [gamma, hk](double t, int order) {
        const Series x = Series::variable(t, order);
        Series s1, c1, s3, c3, s7, c7;
        sincos(x, s1, c1);
        sincos(3.0 * x, s3, c3);
        sincos(7.0 * x, s7, c7);
        Series h(0.0, order);
        for (std::size_t k = 1; k < hk.size(); ++k) h += hk[k] * sin(4.0 * double(k) * x);
        return SVec3{s3 + (3.0 * gamma / 14.0) * s7 + 1.5 * gamma * s1,
                     -1.0 * c3 - (3.0 * gamma / 14.0) * c7 + 1.5 * gamma * c1, h};
      },
      CurveKind::analytic_builtin, "triple-winding", {{"gamma", gamma}, {"N", double(N)}});
}

/// Σ_{k=1}^{K} a_k cos kt + b_k sin kt with Gaussian coefficients scaled by
/// 1/k, seeded.  Generic: embedded, no inflections, torsion of both signs.
inline ClosedCurve random_fourier(std::uint64_t seed, int modes = 4) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<Vec3> a(modes + 1), b(modes + 1);
  for (int k = 1; k <= modes; ++k) {
    a[k] = Vec3(g(rng), g(rng), g(rng)) / k;
    b[k] = Vec3(g(rng), g(rng), g(rng)) / k;
  }
  return ClosedCurve(
      [a, b, modes](double t, int order) {
        SVec3 out{Series(0.0, order), Series(0.0, order), Series(0.0, order)};
        for (int k = 1; k <= modes; ++k) {
          Series s, c;
          sincos(double(k) * Series::variable(t, order), s, c);
          for (int d = 0; d < 3; ++d) out[d] += a[k][d] * c + b[k][d] * s;
        }
        return out;
      },
      CurveKind::analytic_builtin, "random-fourier", {{"seed", double(seed)}, {"modes", double(modes)}});
}

/// Look up a parameter by name.
inline std::optional<double> param(const Params& params, const std::string& key) {
  for (const auto& [k, v] : params)
    if (k == key) return v;
  return std::nullopt;
}

/// Construct a builtin from a name and parameter list (used by the curve
/// spec loader and the CLI).  Unknown names throw invalid-spec.
inline ClosedCurve by_name(const std::string& name, const Params& params = {}) {
  auto get = [&](const char* key, double fallback) { return param(params, key).value_or(fallback); };
  if (name == "circle") return circle(get("radius", 1.0));
  if (name == "kovaleva") return kovaleva();
  if (name == "figure-eight") return figure_eight(get("eps", 0.2));
  if (name == "triple-winding") return triple_winding(get("gamma", 0.9), static_cast<int>(get("N", 10)));
  if (name == "random-fourier") {
    const int modes = static_cast<int>(get("modes", 4));
    if (modes < 1 || modes > 64) throw Error(ErrorCode::invalid_spec, "random-fourier needs 1 <= modes <= 64");
    return random_fourier(static_cast<std::uint64_t>(get("seed", 1)), modes);
  }
  if (name == "torus-knot" || name == "trefoil" || name == "cinquefoil") {
    const int p = static_cast<int>(get("p", 2));
    const int q = static_cast<int>(get("q", name == "cinquefoil" ? 5 : 3));
    TorusKnotParams k;
    if (p == 2 && q == 3) k = trefoil_params();
    else if (p == 2 && q == 5) k = cinquefoil_params();
    k.p = p;
    k.q = q;
    k.R = get("R", k.R);
    k.r = get("r", k.r);
    k.b = get("b", k.b);
    k.c = get("c", k.c);
    k.h = get("h", k.h) < 0 ? -1.0 : 1.0;
    if (std::gcd(k.p, k.q) != 1 || k.p <= 0 || k.q <= 0 || !(k.r > 0) || !(k.R > k.r))
      throw Error(ErrorCode::invalid_spec, "torus knot needs coprime p,q > 0 and R > r > 0");
    return torus_knot(k);
  }
  throw Error(ErrorCode::invalid_spec, "unknown builtin curve '" + name + "'");
}

}  // namespace asym::builtin
