#pragma once

// Linking, writhe, twist, rotation and self-linking of closed curves, and
// the identity checks that tie them together.

#include "asymptote/curve.hpp"
#include "asymptote/error.hpp"
#include "asymptote/framing.hpp"
#include "asymptote/parallel.hpp"
#include "asymptote/projection.hpp"
#include "asymptote/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace asym {

inline constexpr double kFourPi = 4.0 * std::numbers::pi;

/// Γ + εv as a closed curve.
inline ClosedCurve pushed_off(const ClosedCurve& curve, const NormalField& v, double eps) {
  return ClosedCurve(
      [curve, v, eps](double t, int order) { return curve.taylor(t, order) + eps * v.taylor(t, order); },
      curve.kind(), curve.name() + "+eps*" + v.label(), {{"epsilon", eps}});
}

// ---- Gauss linking integral ------------------------------------------------

struct GaussOptions {
  std::size_t start = 1024;
  std::size_t max = 32768;
  double tol = 1e-4;          // successive refinements must agree this well
  double integer_tol = 0.01;  // distance to the nearest integer
};

struct LinkingResult {
  double value = 0.0;
  long integer = 0;
  double residual = 0.0;  // |value − integer|
  std::size_t grid = 0;
};

namespace detail {

struct Samples {
  std::vector<Vec3> p, d;  // positions and h-scaled derivatives
};

inline Samples gauss_samples(const ClosedCurve& c, std::size_t n) {
  Samples s;
  s.p.resize(n);
  s.d.resize(n);
  const double h = kTwoPi / double(n);
  parallel::for_chunks(n, [&](std::size_t b, std::size_t e, std::size_t) {
    for (std::size_t i = b; i < e; ++i) {
      const SVec3 g = c.taylor(h * double(i), 1);
      s.p[i] = value(g);
      s.d[i] = h * derivative(g, 1);
    }
  });
  return s;
}

/// (1/4π) Σ_i Σ_j det(a'_i, b'_j, a_i − b_j) / |a_i − b_j|³ on the product grid.
inline double gauss_linking_sum(const Samples& a, const Samples& b) {
  const std::size_t n = a.p.size(), m = b.p.size();
  const double s = parallel::sum(n, [&](std::size_t i) {
    const Vec3 pi = a.p[i], di = a.d[i];
    double acc = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const Vec3 r = pi - b.p[j];
      const double r2 = r.squaredNorm();
      acc += di.dot(b.d[j].cross(r)) / (r2 * std::sqrt(r2));
    }
    return acc;
  });
  return s / kFourPi;
}

/// Same integrand over one curve; the diagonal term is the continuous
/// extension 0.  Symmetric in (i, j), so only i < j is summed.
inline double gauss_writhe_sum(const Samples& a) {
  const std::size_t n = a.p.size();
  const double s = parallel::sum(n, [&](std::size_t i) {
    const Vec3 pi = a.p[i], di = a.d[i];
    double acc = 0.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const Vec3 r = pi - a.p[j];
      const double r2 = r.squaredNorm();
      acc += di.dot(a.d[j].cross(r)) / (r2 * std::sqrt(r2));
    }
    return acc;
  });
  return 2.0 * s / kFourPi;
}

}  // namespace detail

inline double min_distance(const ClosedCurve& a, const ClosedCurve& b, std::size_t n = 2048) {
  const auto pa = sample(a, n), pb = sample(b, n);
  std::vector<double> best(parallel::kChunks, std::numeric_limits<double>::infinity());
  parallel::for_chunks(n, [&](std::size_t lo, std::size_t hi, std::size_t c) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = lo; i < hi; ++i)
      for (std::size_t j = 0; j < n; ++j) m = std::min(m, (pa[i] - pb[j]).squaredNorm());
    best[c] = m;
  });
  return std::sqrt(*std::min_element(best.begin(), best.end()));
}

/// Linking number of two disjoint closed curves by the Gauss double integral,
/// trapezoid on product grids doubled until two levels agree within tol and
/// the value is within integer_tol of an integer.
inline LinkingResult linking_gauss(const ClosedCurve& c1, const ClosedCurve& c2, const GaussOptions& opt = {}) {
  const double diam = std::max(diameter(c1), diameter(c2));
  const double dmin = min_distance(c1, c2);
  if (dmin <= 1e-6 * diam)
    throw Error(ErrorCode::ill_conditioned_linking, "curves are " + std::to_string(dmin) + " apart");
  std::optional<double> prev;
  LinkingResult r;
  for (std::size_t n = opt.start; n <= opt.max; n *= 2) {
    const double v = detail::gauss_linking_sum(detail::gauss_samples(c1, n), detail::gauss_samples(c2, n));
    r.value = v;
    r.integer = std::lround(v);
    r.residual = std::abs(v - double(r.integer));
    r.grid = n;
    if (prev && std::abs(v - *prev) < opt.tol && r.residual < opt.integer_tol) return r;
    prev = v;
  }
  if (r.residual < opt.integer_tol) return r;
  throw Error(ErrorCode::quadrature_failure,
              "Gauss linking integral " + std::to_string(r.value) + " not within " + std::to_string(opt.integer_tol) +
                  " of an integer at N = " + std::to_string(r.grid));
}

inline double default_epsilon(const ClosedCurve& curve) { return 1e-3 * diameter(curve); }

namespace detail {

/// Smooth cutoff: 1 for |x| ≤ a, 0 for |x| ≥ b, C∞ in between.
inline double band_cutoff(double x, double a, double b) {
  x = std::abs(x);
  if (x <= a) return 1.0;
  if (x >= b) return 0.0;
  auto psi = [](double y) { return y > 0 ? std::exp(-1.0 / y) : 0.0; };
  const double y = (b - x) / (b - a);
  return psi(y) / (psi(y) + psi(1.0 - y));
}

/// Gauss integral of (Γ, Γ + εv).  The integrand peaks with width ε/|Γ'| on
/// s = t.  A cutoff χ(t − s) splits the inner integral: f(1 − χ) is smooth on
/// the scale of the cutoff and goes on the coarse grid, fχ lives in a band
/// and goes on a grid fine enough to resolve the peak.
inline double banded_pushoff_sum(const Samples& a, const Samples& coarse, const Samples& fine, double band_a,
                                 double band_b) {
  const std::size_t n = a.p.size(), nc = coarse.p.size(), nf = fine.p.size();
  const double hc = kTwoPi / double(nc), hf = kTwoPi / double(nf);
  // the outer grid is the coarse grid and divides the fine one, so both
  // cutoffs depend on index offsets only
  const std::size_t ratio = nf / nc;
  std::vector<double> chi_c(nc);
  for (std::size_t k = 0; k < nc; ++k) chi_c[k] = band_cutoff(std::remainder(hc * double(k), kTwoPi), band_a, band_b);
  const long reach = long(std::ceil(band_b / hf));
  std::vector<double> chi_f(2 * reach + 1);
  for (long k = -reach; k <= reach; ++k) chi_f[k + reach] = band_cutoff(hf * double(k), band_a, band_b);
  const double s = parallel::sum(n, [&](std::size_t i) {
    const Vec3 pi = a.p[i], di = a.d[i];
    double acc = 0.0;
    for (std::size_t j = 0; j < nc; ++j) {
      const double w = 1.0 - chi_c[(j + nc - i) % nc];
      if (w == 0.0) continue;
      const Vec3 r = pi - coarse.p[j];
      const double r2 = r.squaredNorm();
      acc += w * di.dot(coarse.d[j].cross(r)) / (r2 * std::sqrt(r2));
    }
    const long centre = long(i * ratio);
    for (long k = -reach; k <= reach; ++k) {
      const double w = chi_f[k + reach];
      if (w == 0.0) continue;
      const std::size_t kk = std::size_t(((centre + k) % long(nf) + long(nf)) % long(nf));
      const Vec3 r = pi - fine.p[kk];
      const double r2 = r.squaredNorm();
      acc += w * di.dot(fine.d[kk].cross(r)) / (r2 * std::sqrt(r2));
    }
    return acc;
  });
  return s / kFourPi;
}

}  // namespace detail

/// Lk(Γ, Γ + εv) with ε = 1e-3 × diameter by the banded Gauss quadrature,
/// refined by doubling both grids until two levels agree within tol.
inline LinkingResult linking_gauss_framing(const ClosedCurve& curve, const NormalField& v, double eps = 0.0,
                                           const GaussOptions& opt = {}) {
  if (eps <= 0) eps = default_epsilon(curve);
  const ClosedCurve push = pushed_off(curve, v, eps);
  const double diam = diameter(curve);
  const double dmin = min_distance(curve, push);
  if (dmin <= 1e-6 * diam)
    throw Error(ErrorCode::ill_conditioned_linking, "push-off is " + std::to_string(dmin) + " from the curve");
  double vmax = 0.0;
  for (const Vec3& d : sample(curve, 2048, 1)) vmax = std::max(vmax, d.norm());
  // peak half-width ε/|Γ'|; a step of a third of it resolves the peak
  std::size_t nf = 1024;
  while (kTwoPi / double(nf) > eps / (3.0 * vmax)) nf *= 2;
  const double band_a = 0.05, band_b = 0.15;
  std::optional<double> prev;
  LinkingResult r;
  for (std::size_t n = opt.start / 2, m = nf; n <= opt.max; n *= 2, m *= 2) {
    const detail::Samples a = detail::gauss_samples(curve, n);
    const double val =
        detail::banded_pushoff_sum(a, detail::gauss_samples(push, n), detail::gauss_samples(push, m), band_a, band_b);
    r.value = val;
    r.integer = std::lround(val);
    r.residual = std::abs(val - double(r.integer));
    r.grid = m;
    if (prev && std::abs(val - *prev) < opt.tol && r.residual < opt.integer_tol) return r;
    prev = val;
  }
  if (r.residual < opt.integer_tol) return r;
  throw Error(ErrorCode::quadrature_failure, "push-off linking integral " + std::to_string(r.value) +
                                                 " not within " + std::to_string(opt.integer_tol) + " of an integer");
}

// ---- writhe ------------------------------------------------------------------

struct WritheOptions {
  std::size_t start = 256;
  std::size_t max = 8192;
  double tol = 1e-7;
};

struct WritheResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t grid = 0;
};

/// Gauss self-integral.  The integrand has a |s − t| kink on the diagonal,
/// so trapezoid errors run in even powers of h; two Richardson steps remove
/// the h² and h⁴ terms.
inline WritheResult writhe_gauss(const ClosedCurve& curve, const WritheOptions& opt = {}) {
  std::vector<double> w;
  std::optional<double> prev;
  WritheResult r;
  for (std::size_t n = opt.start; n <= opt.max; n *= 2) {
    w.push_back(detail::gauss_writhe_sum(detail::gauss_samples(curve, n)));
    if (w.size() < 3) continue;
    const std::size_t k = w.size();
    const double r1a = (4.0 * w[k - 2] - w[k - 3]) / 3.0;
    const double r1b = (4.0 * w[k - 1] - w[k - 2]) / 3.0;
    const double r2 = (16.0 * r1b - r1a) / 15.0;
    r.grid = n;
    if (prev) {
      r.error_estimate = std::abs(r2 - *prev);
      r.value = r2;
      if (r.error_estimate < opt.tol) return r;
    }
    prev = r2;
    r.value = r2;
  }
  if (r.error_estimate < 1e-4) return r;
  throw Error(ErrorCode::quadrature_failure, "writhe refinement did not settle (last change " +
                                                 std::to_string(r.error_estimate) + ")");
}

struct MeanEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  int samples = 0;
};

/// Monte Carlo mean of Cr(Γ_u) over seeded admissible directions.
inline MeanEstimate writhe_average(const ClosedCurve& curve, int n_dirs, std::uint64_t seed) {
  if (n_dirs < 100) throw Error(ErrorCode::invalid_spec, "writhe_average needs at least 100 directions");
  DirectionSampler sampler(curve, nullptr, seed);
  double sum = 0.0, sum2 = 0.0;
  for (int k = 0; k < n_dirs; ++k) {
    const double cr = crossing_number(sampler.next().crossings);
    sum += cr;
    sum2 += cr * cr;
  }
  MeanEstimate m;
  m.samples = n_dirs;
  m.mean = sum / n_dirs;
  const double var = std::max(0.0, (sum2 - n_dirs * m.mean * m.mean) / (n_dirs - 1));
  m.stderr_ = std::sqrt(var / n_dirs);
  return m;
}

// ---- twist and rotation ----------------------------------------------------------

inline void check_normal_field(const ClosedCurve& curve, const NormalField& v, std::size_t n = 512) {
  for (std::size_t i = 0; i < n; ++i) {
    const double t = kTwoPi * double(i) / double(n);
    const Vec3 x = v.at(t);
    const Vec3 T = curve.derivative(t, 1).normalized();
    if (std::abs(x.norm() - 1.0) > 1e-8 || std::abs(x.dot(T)) > 1e-8)
      throw Error(ErrorCode::invalid_framing, "field is not a unit normal at t = " + std::to_string(t));
  }
}

/// θ_v with v = cos θ n⊥ + sin θ n, unwrapped on a grid fine enough that
/// every step stays below π/4; returns the winding (θ(2π) − θ(0))/2π.
inline int rotation_of_field(const ClosedCurve& curve, const NormalField& v, const NormalField& n,
                             std::size_t start = 1024, std::size_t max_grid = 1 << 18) {
  auto angle = [&](double t) {
    const Vec3 T = curve.derivative(t, 1).normalized();
    const Vec3 nn = n.at(t), np = nn.cross(T), vv = v.at(t);
    return std::atan2(vv.dot(nn), vv.dot(np));
  };
  for (std::size_t g = start; g <= max_grid; g *= 2) {
    double total = 0.0, worst = 0.0, prev = angle(0.0);
    for (std::size_t i = 1; i <= g; ++i) {
      const double cur = angle(kTwoPi * double(i) / double(g));
      const double step = std::remainder(cur - prev, kTwoPi);
      worst = std::max(worst, std::abs(step));
      total += step;
      prev = cur;
    }
    if (worst < std::numbers::pi / 4) return static_cast<int>(std::lround(total / kTwoPi));
  }
  throw Error(ErrorCode::resolution_failure, "rotation angle steps stayed >= π/4");
}

/// ∫ τ_g ds over the closed curve.
inline double total_geodesic_torsion(const ClosedCurve& curve, const NormalField& n) {
  return integrate_periodic([&](double t) {
    const DarbouxPoint p = darboux_at(curve, n, t);
    return p.tau_g * p.speed;
  });
}

struct TwistResult {
  double direct = 0.0;        // (1/2π) ∫ ⟨(v×T)', v⟩
  double via_darboux = 0.0;   // (1/2π) ∫ τ_g ds + Rot(v, n)
  int rot = 0;
  double residual = 0.0;
};

inline double twist_direct(const ClosedCurve& curve, const NormalField& v) {
  check_normal_field(curve, v);
  return integrate_periodic([&](double t) {
           const SVec3 T = unit_tangent(curve, t, 1);
           const SVec3 vv = v.taylor(t, 1);
           const SVec3 w = cross(vv, T);
           return derivative(w, 1).dot(value(vv));
         }) /
         kTwoPi;
}

/// Twist of v computed directly and against the Darboux frame of n.
inline TwistResult twist(const ClosedCurve& curve, const NormalField& v, const NormalField& n) {
  TwistResult r;
  r.direct = twist_direct(curve, v);
  r.rot = rotation_of_field(curve, v, n);
  r.via_darboux = total_geodesic_torsion(curve, n) / kTwoPi + r.rot;
  r.residual = std::abs(r.direct - r.via_darboux);
  return r;
}

/// u⊥ = u × T / |u × T|.
inline NormalField blackboard_field(const ClosedCurve& curve, const Vec3& u) {
  const Vec3 uu = u.normalized();
  return NormalField(
      [curve, uu](double t, int order) {
        const SVec3 T = unit_tangent(curve, t, order);
        return normalized(cross(constant(uu, order), T));
      },
      NormalProvenance::analytic, "u-perp");
}

// ---- linking of a framing via crossings ------------------------------------------

struct FramingLinking {
  int via_crossings = 0;  // Cr(Γ_u) + ½ Cr_local
  long via_gauss = 0;
  double gauss_value = 0.0;
  RibbonCrossings ribbon;
  Vec3 u = Vec3::UnitZ();
};

/// Lk(Γ, v) from ribbon crossings along an admissible direction, cross-checked
/// against the Gauss integral of (Γ, Γ+εv).
inline FramingLinking linking_of_framing(const ClosedCurve& curve, const NormalField& v, std::uint64_t seed = 1,
                                         std::optional<Vec3> direction = std::nullopt,
                                         std::optional<LinkingResult> gauss = std::nullopt) {
  FramingLinking out;
  const LinkingResult g = gauss ? *gauss : linking_gauss_framing(curve, v);
  out.gauss_value = g.value;
  out.via_gauss = g.integer;
  bool done = false;
  if (direction) {
    out.u = direction->normalized();
    out.ribbon = ribbon_crossings(curve, v, out.u);
    done = true;
  } else {
    DirectionSampler sampler(curve, &v, seed);
    for (int attempt = 0; attempt < 20 && !done; ++attempt) {
      const Vec3 u = sampler.next().direction.u;
      try {
        out.ribbon = ribbon_crossings(curve, v, u);
        out.u = u;
        done = true;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::epsilon_resolution_failure && e.code() != ErrorCode::non_generic_direction) throw;
      }
    }
  }
  if (!done) throw Error(ErrorCode::epsilon_resolution_failure, "no direction resolved the ribbon crossings");
  if (out.ribbon.total % 2 != 0 || !out.ribbon.consistent)
    throw Error(ErrorCode::inconsistency, "ribbon crossing counts are not consistent (total " +
                                              std::to_string(out.ribbon.total) + ", nonlocal " +
                                              std::to_string(out.ribbon.nonlocal) + ", Cr " +
                                              std::to_string(out.ribbon.self) + ")");
  out.via_crossings = out.ribbon.self + out.ribbon.local / 2;
  if (out.ribbon.local % 2 != 0 || out.via_crossings != out.via_gauss)
    throw Error(ErrorCode::inconsistency, "linking via crossings " + std::to_string(out.via_crossings) +
                                              " != Gauss integral " + std::to_string(g.value));
  return out;
}

// ---- Theorem 1 -----------------------------------------------------------------

struct Theorem1Sides {
  long lhs = 0;  // Lk(Γ, n) from the Gauss integral
  int crossing_number = 0;
  int zeros = 0;
  int tau_sign = 0;
  long rhs = 0;  // Cr(Γ_u) + ½ #{⟨u,n⟩=0} sign(τ_g)
};

/// Both sides of Lk(Γ,n) = Cr(Γ_u) + ½ #{⟨u,n⟩=0} sign(τ_g).  The left side
/// may be supplied when it has already been computed for this framing.
inline Theorem1Sides theorem1_both_sides(const FramedCurve& framed, const Vec3& u,
                                         std::optional<long> lhs = std::nullopt,
                                         std::shared_ptr<const SampledCurve> samples = nullptr,
                                         const CrossingOptions& copt = {}) {
  if (!framed.asymptotic())
    throw Error(ErrorCode::not_asymptotic, "geodesic torsion changes sign; the formula does not apply");
  Theorem1Sides s;
  s.lhs = lhs ? *lhs : linking_gauss_framing(framed.curve(), framed.normal()).integer;
  if (!samples) samples = SampledCurve::make(framed.curve());
  s.crossing_number = crossing_number(self_crossings(project(samples, u), copt));
  s.zeros = normal_direction_zeros(framed.normal(), u).count;
  s.tau_sign = framed.tau_sign();
  if (s.zeros % 2 != 0) throw Error(ErrorCode::inconsistency, "odd number of zeros of <u,n>");
  s.rhs = s.crossing_number + (s.zeros / 2) * s.tau_sign;
  if (s.lhs != s.rhs)
    throw Error(ErrorCode::theorem_violation, "Lk = " + std::to_string(s.lhs) + " but Cr + zeros/2 sign = " +
                                                  std::to_string(s.rhs) + " (Cr " + std::to_string(s.crossing_number) +
                                                  ", zeros " + std::to_string(s.zeros) + ")");
  return s;
}

/// Cr(Γ_u) + ½ Σ sign τ_g(t_i) over the zeros t_i of ⟨u,n⟩.  Reduces to the
/// right side above when τ_g keeps one sign, and stays defined when it does not.
inline long local_sign_rhs(const FramedCurve& framed, const Vec3& u, int crossing_number) {
  const NormalZeros z = normal_direction_zeros(framed.normal(), u);
  int s = 0;
  for (double t : z.zeros) {
    const double tau = framed.at(t).tau_g;
    if (tau == 0.0) throw Error(ErrorCode::non_generic_direction, "τ_g vanishes at a zero of <u,n>");
    s += tau > 0 ? 1 : -1;
  }
  if (s % 2 != 0) throw Error(ErrorCode::inconsistency, "odd signed zero count of <u,n>");
  return crossing_number + s / 2;
}

// ---- self-linking ------------------------------------------------------------------

struct SelfLinking {
  int value = 0;
  int via_projection = 0;  // Cr(Γ_u) + ½ #{⟨u,B⟩=0} sign(τ)
  long via_gauss = 0;      // Lk(Γ, Γ+εN)
  double via_writhe = 0.0; // Wr + (1/2π)∫τ ds
  double writhe = 0.0;
  double total_torsion = 0.0;
  Vec3 u = Vec3::UnitZ();
};

/// Frenet data needed by the self-linking routes; throws no-self-linking
/// when the curve has inflections or its torsion vanishes or changes sign.
inline int torsion_sign_or_throw(const ClosedCurve& curve, std::size_t grid = 4096) {
  const double ktol = inflection_tolerance(curve);
  int sign = 0;
  // a transversal inflection between grid points shows up as Γ'×Γ'' reversing
  Vec3 w_prev = value(detail::binormal_direction(curve, kTwoPi * double(grid - 1) / double(grid), 0));
  for (std::size_t i = 0; i < grid; ++i) {
    const double t = kTwoPi * double(i) / double(grid);
    const Vec3 w = value(detail::binormal_direction(curve, t, 0));
    if (curvature(curve, t) <= ktol || w.dot(w_prev) <= 0.0)
      throw Error(ErrorCode::no_self_linking, "curve has an inflection near t = " + std::to_string(t));
    w_prev = w;
    const double tau = torsion(curve, t, ktol);
    const int s = tau > 1e-12 ? 1 : (tau < -1e-12 ? -1 : 0);
    if (s == 0 || (sign != 0 && s != sign))
      throw Error(ErrorCode::no_self_linking, "torsion vanishes or changes sign");
    sign = s;
  }
  return sign;
}

inline NormalField binormal_field(const ClosedCurve& curve) {
  return NormalField(
      [curve](double t, int order) { return normalized(detail::binormal_direction(curve, t, order)); },
      NormalProvenance::asymptotic_from_curve, "binormal");
}

inline NormalField principal_normal_field(const ClosedCurve& curve) {
  return NormalField(
      [curve](double t, int order) {
        const SVec3 B = normalized(detail::binormal_direction(curve, t, order));
        return cross(B, unit_tangent(curve, t, order));
      },
      NormalProvenance::asymptotic_from_curve, "principal-normal");
}

inline SelfLinking self_linking(const ClosedCurve& curve, std::uint64_t seed = 1) {
  const int tsign = torsion_sign_or_throw(curve);
  const NormalField B = binormal_field(curve);
  SelfLinking sl;
  const AdmissibleDirection d = random_admissible_direction(curve, &B, seed);
  sl.u = d.direction.u;
  const int zeros = normal_direction_zeros(B, sl.u).count;
  sl.via_projection = crossing_number(d.crossings) + (zeros / 2) * tsign;
  sl.via_gauss = linking_gauss_framing(curve, principal_normal_field(curve)).integer;
  sl.writhe = writhe_gauss(curve).value;
  sl.total_torsion = integrate_periodic([&](double t) { return torsion(curve, t, 0.0) * curve.derivative(t, 1).norm(); });
  sl.via_writhe = sl.writhe + sl.total_torsion / kTwoPi;
  sl.value = sl.via_projection;
  if (sl.via_gauss != sl.via_projection || std::abs(sl.via_writhe - sl.via_projection) > 1e-3)
    throw Error(ErrorCode::inconsistency, "self-linking routes disagree: projection " +
                                              std::to_string(sl.via_projection) + ", Gauss " +
                                              std::to_string(sl.via_gauss) + ", writhe " + std::to_string(sl.via_writhe));
  return sl;
}

struct BanchoffCheck {
  int self_linking = 0;
  int crossing_number = 0;
  int planar_inflections = 0;
  int binormal_zeros = 0;
  int residual = 0;  // SL − Cr − ½ sign(τ) Inflection(Γ_u)
  bool inflections_match_zeros = false;
};

inline BanchoffCheck banchoff_check(const ClosedCurve& curve, const Vec3& u, int self_linking_number,
                                    std::shared_ptr<const SampledCurve> samples = nullptr) {
  const int tsign = torsion_sign_or_throw(curve, 1024);
  if (!samples) samples = SampledCurve::make(curve);
  const PlanarProjection proj = project(samples, u);
  BanchoffCheck b;
  b.self_linking = self_linking_number;
  b.crossing_number = crossing_number(proj);
  b.planar_inflections = planar_inflections(proj).count;
  b.binormal_zeros = normal_direction_zeros(binormal_field(curve), u).count;
  b.inflections_match_zeros = b.planar_inflections == b.binormal_zeros;
  b.residual = b.self_linking - b.crossing_number - tsign * b.planar_inflections / 2;
  return b;
}

// ---- Crofton / Milnor ------------------------------------------------------------------

struct CroftonCheck {
  MeanEstimate zeros;         // E_u #{⟨u,B⟩=0}
  double length_B = 0.0;      // ∫|B'| dt
  double length_B_over_pi = 0.0;
  double relative_gap = 0.0;  // |mean − L/π| / (L/π)
  double total_torsion = 0.0; // ∫τ ds
  double total_abs_torsion = 0.0;
  double torsion_residual = 0.0;  // |2∫τ − 2 sign(τ) Length(B)|
};

inline CroftonCheck crofton_milnor_check(const ClosedCurve& curve, int n_dirs, std::uint64_t seed) {
  const int tsign = torsion_sign_or_throw(curve, 1024);
  const NormalField B = binormal_field(curve);
  CroftonCheck c;
  c.length_B = integrate_periodic([&](double t) { return B.d1(t).norm(); });
  c.length_B_over_pi = c.length_B / std::numbers::pi;
  c.total_torsion = integrate_periodic([&](double t) { return torsion(curve, t, 0.0) * curve.derivative(t, 1).norm(); });
  c.total_abs_torsion = std::abs(c.total_torsion);
  c.torsion_residual = std::abs(2.0 * c.total_torsion - 2.0 * tsign * c.length_B);
  std::mt19937_64 rng(seed);
  double sum = 0.0, sum2 = 0.0;
  int got = 0, rejected = 0;
  while (got < n_dirs) {
    const Vec3 u = uniform_on_sphere(rng);
    int z;
    try {
      z = normal_direction_zeros(B, u, 4096, 1e-6).count;
    } catch (const Error&) {
      if (++rejected > 10000) throw Error(ErrorCode::sampling_failure, "too many non-generic directions");
      continue;
    }
    sum += z;
    sum2 += double(z) * z;
    ++got;
  }
  c.zeros.samples = got;
  c.zeros.mean = sum / got;
  c.zeros.stderr_ = std::sqrt(std::max(0.0, (sum2 - got * c.zeros.mean * c.zeros.mean) / (got - 1)) / got);
  c.relative_gap = std::abs(c.zeros.mean - c.length_B_over_pi) / c.length_B_over_pi;
  return c;
}

// ---- spherical image identities ---------------------------------------------------------

struct SphericalChecks {
  double int_kappa_tilde = 0.0;  // ∫ κ̃_g |n'| dt
  double int_kappa_g = 0.0;      // ∫ κ_g ds
  double int_tau_g = 0.0;        // ∫ τ_g ds
  double int_kappa = 0.0;        // ∫ κ ds
  double length_n = 0.0;         // ∫ |n'| dt
  double max_ratio_residual = 0.0;      // max |κ̃_g − κ_g/|τ_g|| / max(1, |κ_g/τ_g|)
  double max_ratio_residual_abs = 0.0;  // max |κ̃_g − κ_g/|τ_g||
  double kappa_kappa_residual = 0.0; // |∫κ̃_g dσ − ∫κ_g ds|
  int tau_sign = 0;
  bool injective = false;
  bool area_checks_run = false;
  std::string area_skip_reason;
  double area = 0.0;  // 2π − ∫κ̃_g dσ
  bool area_in_range = false;
  bool gauss_bonnet_bound = false;  // |∫κ̃_g| < 2π
  bool isoperimetric = false;       // L² > 4πA − A²
  bool kappa_tau = false;           // (∫κ_g)² + (∫τ_g)² > 4π²
  bool fenchel = false;             // ∫κ ≥ 2π − 1e-6
};

inline SphericalChecks spherical_checks(const FramedCurve& framed, std::size_t grid = 1000) {
  const ClosedCurve& c = framed.curve();
  const NormalField& n = framed.normal();
  SphericalChecks r;
  r.tau_sign = framed.tau_sign();
  for (std::size_t i = 0; i < grid; ++i) {
    const SphericalCurvatureSample k = spherical_geodesic_curvature(framed, kTwoPi * double(i) / double(grid));
    r.max_ratio_residual_abs = std::max(r.max_ratio_residual_abs, k.residual);
    r.max_ratio_residual = std::max(r.max_ratio_residual, k.residual / std::max(1.0, std::abs(k.ratio)));
  }
  r.int_kappa_tilde = integrate_periodic([&](double t) { return spherical_geodesic_curvature(n, t) * n.d1(t).norm(); });
  r.int_kappa_g = integrate_periodic([&](double t) {
    const DarbouxPoint p = darboux_at(c, n, t);
    return p.kappa_g * p.speed;
  });
  r.int_tau_g = total_geodesic_torsion(c, n);
  r.int_kappa = integrate_periodic([&](double t) { return curvature(c, t) * c.derivative(t, 1).norm(); });
  r.length_n = integrate_periodic([&](double t) { return n.d1(t).norm(); });
  r.kappa_kappa_residual = std::abs(r.int_kappa_tilde - r.int_kappa_g);
  r.fenchel = r.int_kappa >= kTwoPi - 1e-6;
  r.kappa_tau = r.int_kappa_g * r.int_kappa_g + r.int_tau_g * r.int_tau_g > kTwoPi * kTwoPi;
  r.gauss_bonnet_bound = std::abs(r.int_kappa_tilde) < kTwoPi;
  const InjectivityResult inj = spherical_image_injective(n);
  r.injective = inj.injective && !inj.inconclusive;
  if (!r.injective) {
    r.area_skip_reason = inj.inconclusive ? "spherical image injectivity inconclusive" : "spherical image not injective";
    return r;
  }
  r.area_checks_run = true;
  r.area = kTwoPi - r.int_kappa_tilde;
  r.area_in_range = r.area > 0.0 && r.area < 2.0 * kTwoPi;
  r.isoperimetric = r.length_n * r.length_n > 2.0 * kTwoPi * r.area - r.area * r.area;
  return r;
}

// ---- height identity ---------------------------------------------------------------------

struct PetruninCheck {
  double residual = 0.0;          // max |h'⟨u,n⟩² − τ_g |Γ'| ⟨Γ, T×u⟩| / scale
  double residual_negated = 0.0;  // same with the left side negated
  double scale = 0.0;
};

/// h = ⟨Γ,n⟩/⟨u,n⟩ satisfies h'⟨u,n⟩² = τ_g ⟨Γ, T×u⟩ per unit arclength
/// under n' = −τ_g n⊥, n⊥ = n×T.  Both sign readings are reported.
inline PetruninCheck petrunin_identity_check(const FramedCurve& framed, const Vec3& u, std::size_t grid = 1024) {
  const ClosedCurve& c = framed.curve();
  const NormalField& n = framed.normal();
  if (normal_direction_zeros(n, u).count != 0)
    throw Error(ErrorCode::inapplicable_direction, "<u,n> has zeros along the curve");
  std::vector<double> lhs(grid), rhs(grid);
  for (std::size_t i = 0; i < grid; ++i) {
    const double t = kTwoPi * double(i) / double(grid);
    const SVec3 g = c.taylor(t, 1);
    const SVec3 nn = n.taylor(t, 1);
    const SVec3 uu = constant(u, 1);
    const Series un = dot(uu, nn);
    const Series h = dot(g, nn) / un;
    lhs[i] = h.derivative(1) * un.value() * un.value();
    const DarbouxPoint p = darboux_at(c, n, t);
    rhs[i] = p.tau_g * p.speed * value(g).dot(p.T.cross(u));
  }
  PetruninCheck r;
  for (std::size_t i = 0; i < grid; ++i) r.scale = std::max({r.scale, std::abs(rhs[i]), std::abs(lhs[i])});
  if (r.scale == 0.0) return r;  // both sides vanish identically
  for (std::size_t i = 0; i < grid; ++i) {
    r.residual = std::max(r.residual, std::abs(lhs[i] - rhs[i]) / r.scale);
    r.residual_negated = std::max(r.residual_negated, std::abs(-lhs[i] - rhs[i]) / r.scale);
  }
  return r;
}

// ---- frame change -----------------------------------------------------------------------

struct Link2Check {
  int m = 0;
  long lk_v = 0, lk_n = 0;
  long residual = 0;  // Lk(v_m) − Lk(n) − m
};

inline Link2Check link2_check(const FramedCurve& framed, int m, std::optional<long> lk_n = std::nullopt,
                              std::uint64_t seed = 1) {
  Link2Check r;
  r.m = m;
  r.lk_n = lk_n ? *lk_n : linking_of_framing(framed.curve(), framed.normal(), seed).via_gauss;
  r.lk_v = linking_of_framing(framed.curve(), rotated_field(framed.curve(), framed.normal(), m), seed).via_gauss;
  r.residual = r.lk_v - r.lk_n - m;
  return r;
}

}  // namespace asym
