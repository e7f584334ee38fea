#pragma once

// Frenet and Darboux frames along closed curves.
//
// Conventions: s is arclength, primes on frame vectors below are d/ds.
//   n⊥ = n × T,   T' = κ_g n⊥,   n⊥' = −κ_g T + τ_g n,   n' = −τ_g n⊥.
// All quantities are computed at raw parameter t and divided by |Γ'(t)|.

#include "asymptote/curve.hpp"
#include "asymptote/error.hpp"
#include "asymptote/roots.hpp"
#include "asymptote/series.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace asym {

// ---- Frenet quantities ---------------------------------------------------

struct FrenetFrame {
  Vec3 T, N, B;
};

inline double curvature(const ClosedCurve& curve, double t) {
  const SVec3 g = curve.taylor(t, 2);
  const Vec3 d1 = derivative(g, 1), d2 = derivative(g, 2);
  return d1.cross(d2).norm() / std::pow(d1.norm(), 3);
}

/// 1e-8 × the largest curvature seen on a uniform grid.
inline double inflection_tolerance(const ClosedCurve& curve, std::size_t n = 1024) {
  double k = 0.0;
  for (std::size_t i = 0; i < n; ++i) k = std::max(k, curvature(curve, kTwoPi * double(i) / double(n)));
  return 1e-8 * k;
}

inline double torsion(const ClosedCurve& curve, double t, double kappa_tol) {
  const SVec3 g = curve.taylor(t, 3);
  const Vec3 d1 = derivative(g, 1), d2 = derivative(g, 2), d3 = derivative(g, 3);
  const Vec3 w = d1.cross(d2);
  if (w.norm() / std::pow(d1.norm(), 3) <= kappa_tol)
    throw Error(ErrorCode::inflection_point, "torsion undefined at t = " + std::to_string(t));
  return w.dot(d3) / w.squaredNorm();
}
inline double torsion(const ClosedCurve& curve, double t) { return torsion(curve, t, inflection_tolerance(curve)); }

inline FrenetFrame frenet_frame(const ClosedCurve& curve, double t, double kappa_tol) {
  const SVec3 g = curve.taylor(t, 2);
  const Vec3 d1 = derivative(g, 1), d2 = derivative(g, 2);
  const Vec3 w = d1.cross(d2);
  if (w.norm() / std::pow(d1.norm(), 3) <= kappa_tol)
    throw Error(ErrorCode::inflection_point, "Frenet frame undefined at t = " + std::to_string(t));
  FrenetFrame f;
  f.T = d1.normalized();
  f.B = w.normalized();
  f.N = f.B.cross(f.T);
  return f;
}
inline FrenetFrame frenet_frame(const ClosedCurve& curve, double t) {
  return frenet_frame(curve, t, inflection_tolerance(curve));
}

// ---- normal fields -------------------------------------------------------

enum class NormalProvenance { analytic, asymptotic_from_curve };

/// A unit field along the curve, evaluable as a Taylor series in t.
class NormalField {
 public:
  NormalField() = default;
  NormalField(TaylorFn fn, NormalProvenance prov, std::string label, std::vector<double> flips = {})
      : fn_(std::make_shared<TaylorFn>(std::move(fn))), prov_(prov), label_(std::move(label)),
        flips_(std::move(flips)) {}

  SVec3 taylor(double t, int order) const { return (*fn_)(t, order); }
  Vec3 at(double t) const { return value(taylor(t, 0)); }
  Vec3 d1(double t) const { return derivative(taylor(t, 1), 1); }
  Vec3 d2(double t) const { return derivative(taylor(t, 2), 2); }

  NormalProvenance provenance() const { return prov_; }
  const std::string& label() const { return label_; }
  /// Parameters where an asymptotic normal switched between +B and −B.
  const std::vector<double>& sign_flips() const { return flips_; }
  bool valid() const { return static_cast<bool>(fn_); }

 private:
  std::shared_ptr<const TaylorFn> fn_;
  NormalProvenance prov_ = NormalProvenance::analytic;
  std::string label_;
  std::vector<double> flips_;
};

inline NormalField constant_field(const Vec3& v, std::string label = "constant") {
  const Vec3 u = v.normalized();
  return NormalField([u](double, int order) { return constant(u, order); }, NormalProvenance::analytic,
                     std::move(label));
}

inline SVec3 unit_tangent(const ClosedCurve& curve, double t, int order) {
  return normalized(differentiated(curve.taylor(t, order + 1)));
}

/// v_m = cos(m t) n⊥ + sin(m t) n: the field n rotated m full turns.
inline NormalField rotated_field(const ClosedCurve& curve, const NormalField& n, int m) {
  return NormalField(
      [curve, n, m](double t, int order) {
        const SVec3 T = unit_tangent(curve, t, order);
        const SVec3 nn = n.taylor(t, order);
        const SVec3 np = cross(nn, T);
        Series s, c;
        sincos(double(m) * Series::variable(t, order), s, c);
        return c * np + s * nn;
      },
      NormalProvenance::analytic, n.label() + "/rot" + std::to_string(m));
}

// ---- Darboux frame at a point -------------------------------------------

struct DarbouxPoint {
  double t = 0.0;
  double speed = 0.0;  // |Γ'(t)|
  Vec3 T, n_perp, n;
  Vec3 dT, dn_perp, dn;  // d/ds
  double kappa_g = 0.0, tau_g = 0.0;
  double kappa_n = 0.0;   // ⟨T', n⟩, zero for an asymptotic framing
  double normality = 0.0; // |⟨n, T⟩|
  double residual = 0.0;  // max residual of the three frame equations
};

inline DarbouxPoint darboux_at(const ClosedCurve& curve, const NormalField& normal, double t) {
  const SVec3 g1 = differentiated(curve.taylor(t, 2));
  const SVec3 T = normalized(g1);
  const SVec3 n = normal.taylor(t, 1);
  const SVec3 np = cross(n, T);
  DarbouxPoint p;
  p.t = t;
  p.speed = value(g1).norm();
  p.T = value(T);
  p.n = value(n);
  p.n_perp = value(np);
  p.dT = derivative(T, 1) / p.speed;
  p.dn = derivative(n, 1) / p.speed;
  p.dn_perp = derivative(np, 1) / p.speed;
  p.kappa_g = p.dT.dot(p.n_perp);
  p.tau_g = p.dn_perp.dot(p.n);
  p.kappa_n = p.dT.dot(p.n);
  p.normality = std::abs(p.n.dot(p.T));
  const double r1 = (p.dT - p.kappa_g * p.n_perp).norm();
  const double r2 = (p.dn_perp + p.kappa_g * p.T - p.tau_g * p.n).norm();
  const double r3 = (p.dn + p.tau_g * p.n_perp).norm();
  p.residual = std::max({r1, r2, r3, std::abs(p.n.norm() - 1.0), p.normality});
  return p;
}

// ---- asymptotic (±B) normal ----------------------------------------------

struct AsymptoticOptions {
  std::size_t grid = 4096;
  int initial_sign = +1;      // n(0) = initial_sign · B(0)
  double flip_tol = 1e-7;     // |Γ'×Γ''| at a flip, relative to its maximum
  int local_order = 12;       // Taylor order of the regularized form near flips
  double local_radius = 1e-3; // use the regularized form within this |t − t*|
};

namespace detail {

inline SVec3 binormal_direction(const ClosedCurve& curve, double t, int order) {
  const SVec3 g = curve.taylor(t, order + 2);
  const SVec3 d1 = differentiated(g);
  return cross(d1, differentiated(d1));
}

struct FlipData {
  double t;
  int sign_after;
  SVec3 w_over_h;  // (Γ'×Γ'')(t*+h) / h expanded at h = 0
};

}  // namespace detail

/// Continuous unit field n = ±B.  The sign is carried along a uniform grid;
/// where B reverses between neighbours the zero of Γ'×Γ'' is located and the
/// sign flips there, so n stays smooth through inflections.
inline NormalField asymptotic_normal(const ClosedCurve& curve, const AsymptoticOptions& opt = {}) {
  const std::size_t n = opt.grid;
  std::vector<Vec3> w(n);
  std::vector<double> kappa(n);
  double wmax = 0.0, kmax = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = kTwoPi * double(i) / double(n);
    const SVec3 g = curve.taylor(t, 2);
    const Vec3 d1 = derivative(g, 1);
    w[i] = d1.cross(derivative(g, 2));
    kappa[i] = w[i].norm() / std::pow(d1.norm(), 3);
    wmax = std::max(wmax, w[i].norm());
    kmax = std::max(kmax, kappa[i]);
  }
  // vanishing curvature on a stretch of consecutive samples
  {
    std::size_t run = 0, longest = 0;
    for (std::size_t i = 0; i < 2 * n; ++i) {
      run = kappa[i % n] <= 1e-8 * kmax ? run + 1 : 0;
      longest = std::max(longest, run);
    }
    if (longest >= 3 || kmax == 0.0)
      throw Error(ErrorCode::no_darboux_framing, "curvature vanishes on an interval");
  }

  auto wdot = [&](double t) {
    const SVec3 ws = detail::binormal_direction(curve, t, 1);
    return derivative(ws, 0).dot(derivative(ws, 1));
  };

  std::vector<detail::FlipData> flips;
  const int sign0 = opt.initial_sign >= 0 ? 1 : -1;
  int sign = sign0;
  std::vector<bool> usable(n);
  for (std::size_t i = 0; i < n; ++i) usable[i] = w[i].norm() > 1e-12 * wmax;
  // start at the first sample where B is defined; k counts unwrapped steps
  std::size_t i0 = 0;
  while (!usable[i0]) ++i0;
  std::size_t last_k = i0;
  for (std::size_t k = i0 + 1; k <= i0 + n; ++k) {
    const std::size_t i = k % n, last = last_k % n;
    if (!usable[i]) continue;
    if (w[i].dot(w[last]) < 0) {
      // B reversed between the two samples: find the minimum of |W|
      const double a = kTwoPi * double(last_k) / double(n);
      const double b = kTwoPi * double(k) / double(n);
      const double fa = wdot(a), fb = wdot(b);
      double tstar;
      if (fa < 0 && fb > 0) {
        tstar = refine_root(wdot, {a, b, fa, fb}, 1e-14);
      } else {
        auto r = boost::math::tools::brent_find_minima(
            [&](double t) { return value(detail::binormal_direction(curve, t, 0)).squaredNorm(); }, a, b, 50);
        tstar = r.first;
      }
      const double wstar = value(detail::binormal_direction(curve, tstar, 0)).norm();
      if (wstar <= opt.flip_tol * wmax) {
        sign = -sign;
        detail::FlipData f;
        f.t = wrap_angle(tstar);
        f.sign_after = sign;
        const SVec3 ws = detail::binormal_direction(curve, f.t, opt.local_order);
        for (int d = 0; d < 3; ++d) {
          Series s(0.0, opt.local_order - 1);
          for (int j = 0; j < opt.local_order; ++j) s[j] = ws[d][j + 1];
          f.w_over_h[d] = s;
        }
        flips.push_back(f);
      }
      // otherwise B turns quickly but continuously; the sign is kept
    }
    last_k = k;
  }
  if (sign != sign0)
    throw Error(ErrorCode::no_darboux_framing, "odd number of inflections: ±B cannot close up");

  std::sort(flips.begin(), flips.end(), [](const auto& x, const auto& y) { return x.t < y.t; });
  std::vector<double> flip_ts;
  for (const auto& f : flips) flip_ts.push_back(f.t);
  const double radius = opt.local_radius;

  auto fn = [curve, flips, sign0, radius](double t, int order) -> SVec3 {
    const double tw = wrap_angle(t);
    // nearby flip: regularized W/(t − t*)
    for (const auto& f : flips) {
      const double d = circular_diff(tw, f.t);
      if (std::abs(d) < radius) {
        SVec3 v;
        for (int c = 0; c < 3; ++c) v[c] = shifted(f.w_over_h[c], d, order);
        return double(f.sign_after) * normalized(v);
      }
    }
    // sign on [t_j, t_{j+1}) is the one set by flip j, cyclically
    int s = flips.empty() ? sign0 : flips.back().sign_after;
    for (const auto& f : flips)
      if (f.t <= tw) s = f.sign_after;
    const SVec3 wv = detail::binormal_direction(curve, t, order);
    for (const auto& f : flips) {
      const double d = circular_diff(tw, f.t);
      if (std::abs(d) < 0.05) {
        // divide out the simple zero to keep derivatives well conditioned
        const Series x = Series::variable(d, order);
        return double(f.sign_after) * normalized(wv / x);
      }
    }
    return double(s) * normalized(wv);
  };
  return NormalField(fn, NormalProvenance::asymptotic_from_curve, "asymptotic", flip_ts);
}

// ---- framed curves -------------------------------------------------------

struct FramingOptions {
  std::size_t grid = 1024;
  double residual_tol = 1e-6;
  bool require_asymptotic = true;  // τ_g of one sign and nonvanishing
};

/// A curve with a unit normal field forming a Darboux frame.  Grid samples
/// of κ_g and τ_g are computed once at construction.
class FramedCurve {
 public:
  FramedCurve(ClosedCurve curve, NormalField normal, FramingOptions opt = {})
      : curve_(std::move(curve)), normal_(std::move(normal)), opt_(opt) {
    const std::size_t n = opt_.grid;
    kappa_g_.resize(n);
    tau_g_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const DarbouxPoint p = darboux_at(curve_, normal_, kTwoPi * double(i) / double(n));
      kappa_g_[i] = p.kappa_g;
      tau_g_[i] = p.tau_g;
      max_residual_ = std::max(max_residual_, p.residual);
    }
    if (max_residual_ > opt_.residual_tol)
      throw Error(ErrorCode::inconsistent_framing,
                  "Darboux equations violated (max residual " + std::to_string(max_residual_) + ")");
    min_abs_tau_ = std::abs(tau_g_[0]);
    for (std::size_t i = 0; i < n; ++i) {
      min_abs_tau_ = std::min(min_abs_tau_, std::abs(tau_g_[i]));
      if ((tau_g_[i] < 0) != (tau_g_[(i + 1) % n] < 0)) ++tau_sign_changes_;
    }
    double tmax = 0.0;
    for (double v : tau_g_) tmax = std::max(tmax, std::abs(v));
    asymptotic_ = tau_sign_changes_ == 0 && min_abs_tau_ > 1e-10 * std::max(tmax, 1e-300);
    if (opt_.require_asymptotic && !asymptotic_)
      throw Error(ErrorCode::not_asymptotic, "geodesic torsion vanishes or changes sign (" +
                                                 std::to_string(tau_sign_changes_) + " sign changes, min |τ_g| = " +
                                                 std::to_string(min_abs_tau_) + ")");
  }

  const ClosedCurve& curve() const { return curve_; }
  const NormalField& normal() const { return normal_; }
  const FramingOptions& options() const { return opt_; }
  const std::vector<double>& kappa_g_grid() const { return kappa_g_; }
  const std::vector<double>& tau_g_grid() const { return tau_g_; }
  double max_residual() const { return max_residual_; }
  double min_abs_tau() const { return min_abs_tau_; }
  int tau_sign_changes() const { return tau_sign_changes_; }
  bool asymptotic() const { return asymptotic_; }
  /// +1 or −1 when τ_g keeps one sign, 0 otherwise.
  int tau_sign() const { return asymptotic_ ? (tau_g_[0] > 0 ? 1 : -1) : 0; }

  DarbouxPoint at(double t) const { return darboux_at(curve_, normal_, t); }
  std::size_t grid() const { return opt_.grid; }

 private:
  ClosedCurve curve_;
  NormalField normal_;
  FramingOptions opt_;
  std::vector<double> kappa_g_, tau_g_;
  double max_residual_ = 0.0;
  double min_abs_tau_ = 0.0;
  int tau_sign_changes_ = 0;
  bool asymptotic_ = false;
};

struct GeodesicQuantities {
  double kappa_g, tau_g, residual;
};

inline GeodesicQuantities geodesic_quantities(const ClosedCurve& curve, const NormalField& normal, double t,
                                              double tol = 1e-6) {
  const DarbouxPoint p = darboux_at(curve, normal, t);
  if (p.residual > tol)
    throw Error(ErrorCode::inconsistent_framing,
                "Darboux residual " + std::to_string(p.residual) + " at t = " + std::to_string(t));
  return {p.kappa_g, p.tau_g, p.residual};
}
inline GeodesicQuantities geodesic_quantities(const FramedCurve& framed, double t) {
  return geodesic_quantities(framed.curve(), framed.normal(), t, framed.options().residual_tol);
}

// ---- inflections ---------------------------------------------------------

struct InflectionSet {
  std::vector<double> zeros;       // transversal sign changes of κ_g
  std::vector<double> degenerate;  // near-zero minima of |κ_g| without sign change
};

inline InflectionSet inflections(const FramedCurve& framed, std::size_t grid = 4096) {
  auto kg = [&](double t) { return framed.at(t).kappa_g; };
  InflectionSet out;
  for (const Bracket& b : scan_sign_changes(kg, grid)) out.zeros.push_back(wrap_angle(refine_root(kg, b, 1e-10)));
  // touching zeros
  std::vector<double> v(grid);
  double vmax = 0.0;
  for (std::size_t i = 0; i < grid; ++i) {
    v[i] = kg(kTwoPi * double(i) / double(grid));
    vmax = std::max(vmax, std::abs(v[i]));
  }
  for (std::size_t i = 0; i < grid; ++i) {
    const double a = v[(i + grid - 1) % grid], b = v[i], c = v[(i + 1) % grid];
    const bool same_sign = (a < 0) == (b < 0) && (b < 0) == (c < 0);
    if (same_sign && std::abs(b) < std::abs(a) && std::abs(b) <= std::abs(c) && std::abs(b) < 1e-6 * vmax)
      out.degenerate.push_back(kTwoPi * double(i) / double(grid));
  }
  std::sort(out.zeros.begin(), out.zeros.end());
  return out;
}

// ---- ruled strip and spherical image -------------------------------------

/// Gauss curvature at s = 0 of X(t,s) = Γ(t) + s n⊥(t), from the first and
/// second fundamental forms in the raw (t, s) coordinates.
inline double ruled_patch_curvature(const ClosedCurve& curve, const NormalField& normal, double t) {
  const SVec3 g = curve.taylor(t, 2);
  const SVec3 g1 = differentiated(g);
  const SVec3 T = normalized(g1);
  const SVec3 np = cross(normal.taylor(t, 1), T);
  const Vec3 Xt = derivative(g, 1), Xs = value(np);
  const Vec3 Xtt = derivative(g, 2), Xts = derivative(np, 1);  // X_ss = 0
  const double E = Xt.dot(Xt), F = Xt.dot(Xs), G = Xs.dot(Xs);
  const double det = E * G - F * F;
  const Vec3 c = Xt.cross(Xs);
  if (det <= 1e-24 * E * E || c.norm() == 0.0)
    throw Error(ErrorCode::degenerate_patch, "first fundamental form degenerate at t = " + std::to_string(t));
  const Vec3 nu = c.normalized();
  const double L = Xtt.dot(nu), M = Xts.dot(nu), N = 0.0;
  return (L * N - M * M) / det;
}
inline double ruled_patch_curvature(const FramedCurve& framed, double t) {
  return ruled_patch_curvature(framed.curve(), framed.normal(), t);
}

/// Geodesic curvature of the spherical curve t ↦ n(t): ⟨n'', n×n'⟩/|n'|³.
inline double spherical_geodesic_curvature(const NormalField& normal, double t, double tol = 1e-10) {
  const SVec3 s = normal.taylor(t, 2);
  const Vec3 n = value(s), d1 = derivative(s, 1), d2 = derivative(s, 2);
  const double speed = d1.norm();
  if (speed < tol) throw Error(ErrorCode::spherical_singularity, "|n'| vanishes at t = " + std::to_string(t));
  return d2.dot(n.cross(d1)) / (speed * speed * speed);
}

struct SphericalCurvatureSample {
  double kappa_tilde;
  double ratio;     // κ_g / |τ_g|
  double residual;  // |κ̃_g − κ_g/|τ_g||
};

inline SphericalCurvatureSample spherical_geodesic_curvature(const FramedCurve& framed, double t) {
  const double kt = spherical_geodesic_curvature(framed.normal(), t);
  const DarbouxPoint p = framed.at(t);
  const double ratio = p.kappa_g / std::abs(p.tau_g);
  return {kt, ratio, std::abs(kt - ratio)};
}

// ---- self-intersections of the spherical image ---------------------------

struct SphericalSelfIntersection {
  double s, t;
  bool degenerate;  // tangents parallel: part of a continuum of coincidences
};

struct InjectivityResult {
  bool injective = true;
  bool inconclusive = false;  // some candidates failed to converge
  std::vector<SphericalSelfIntersection> pairs;
  int unresolved = 0;
};

inline InjectivityResult spherical_image_injective(const NormalField& normal, std::size_t grid = 2048) {
  const std::size_t n = grid;
  std::vector<Vec3> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = normal.at(kTwoPi * double(i) / double(n));
  double seg = 0.0;
  for (std::size_t i = 0; i < n; ++i) seg = std::max(seg, (p[(i + 1) % n] - p[i]).norm());

  // Bucket segment midpoints on a 3D grid of cell size ~ 2 seg.
  const double cell = std::max(2.0 * seg, 1e-6);
  auto key = [&](const Vec3& x) {
    return std::array<long, 3>{long(std::floor(x[0] / cell)), long(std::floor(x[1] / cell)),
                               long(std::floor(x[2] / cell))};
  };
  std::map<std::array<long, 3>, std::vector<std::size_t>> buckets;
  for (std::size_t i = 0; i < n; ++i) buckets[key(0.5 * (p[i] + p[(i + 1) % n]))].push_back(i);

  auto seg_dist = [&](std::size_t i, std::size_t j, double& a, double& b) {
    // closest points on segments [p_i, p_i+1] and [p_j, p_j+1]
    const Vec3 P = p[i], u = p[(i + 1) % n] - P, Q = p[j], v = p[(j + 1) % n] - Q, w0 = P - Q;
    const double A = u.dot(u), B = u.dot(v), C = v.dot(v), D = u.dot(w0), E = v.dot(w0);
    const double den = A * C - B * B;
    a = den > 1e-300 ? std::clamp((B * E - C * D) / den, 0.0, 1.0) : 0.0;
    b = C > 0 ? std::clamp((B * a + E) / C, 0.0, 1.0) : 0.0;
    a = A > 0 ? std::clamp((B * b - D) / A, 0.0, 1.0) : 0.0;
    return (P + a * u - Q - b * v).norm();
  };

  InjectivityResult res;
  const double h = kTwoPi / double(n);
  const std::size_t min_sep = 4;
  for (const auto& [k, ids] : buckets) {
    for (long dx = -1; dx <= 1; ++dx)
      for (long dy = -1; dy <= 1; ++dy)
        for (long dz = -1; dz <= 1; ++dz) {
          auto it = buckets.find({k[0] + dx, k[1] + dy, k[2] + dz});
          if (it == buckets.end()) continue;
          for (std::size_t i : ids)
            for (std::size_t j : it->second) {
              if (j <= i) continue;
              const std::size_t gap = std::min(j - i, n - (j - i));
              if (gap < min_sep) continue;
              double a, b;
              if (seg_dist(i, j, a, b) > 0.5 * seg) continue;
              // Gauss–Newton on n(s) − n(t) = 0
              double s = h * (double(i) + a), t = h * (double(j) + b);
              bool ok = false, degenerate = false;
              for (int it2 = 0; it2 < 50; ++it2) {
                const Vec3 r = normal.at(s) - normal.at(t);
                if (r.norm() < 1e-13) {
                  ok = true;
                  break;
                }
                Eigen::Matrix<double, 3, 2> J;
                J.col(0) = normal.d1(s);
                J.col(1) = -normal.d1(t);
                const Eigen::Matrix2d JtJ = J.transpose() * J;
                if (std::abs(JtJ.determinant()) < 1e-14 * JtJ.trace() * JtJ.trace()) {
                  degenerate = true;
                  ok = r.norm() < 1e-8;
                  break;
                }
                const Eigen::Vector2d step = JtJ.ldlt().solve(J.transpose() * r);
                s -= step[0];
                t -= step[1];
              }
              if (!ok) {
                // candidates that do not converge are usually near misses
                // or slid onto the diagonal, where the residual also vanishes
                const Vec3 r = normal.at(s) - normal.at(t);
                if (r.norm() < 1e-6 && std::abs(circular_diff(s, t)) >= 4 * h) ++res.unresolved;
                continue;
              }
              s = wrap_angle(s);
              t = wrap_angle(t);
              if (std::abs(circular_diff(s, t)) < 4 * h) continue;
              {
                const Vec3 a1 = normal.d1(s), b1 = normal.d1(t);
                if (a1.cross(b1).norm() < 1e-7 * a1.norm() * b1.norm()) degenerate = true;
              }
              if (s > t) std::swap(s, t);
              bool dup = false;
              for (const auto& q : res.pairs)
                if (std::abs(circular_diff(q.s, s)) < 1e-8 && std::abs(circular_diff(q.t, t)) < 1e-8) dup = true;
              if (!dup) res.pairs.push_back({s, t, degenerate});
            }
        }
  }
  std::sort(res.pairs.begin(), res.pairs.end(), [](const auto& x, const auto& y) {
    return std::tie(x.s, x.t) < std::tie(y.s, y.t);
  });
  res.injective = res.pairs.empty();
  res.inconclusive = res.unresolved > 0;
  return res;
}

}  // namespace asym
