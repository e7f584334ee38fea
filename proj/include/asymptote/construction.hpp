#pragma once

// Building a closed curve from a prescribed spherical normal loop:
//   n  →  T = n × n' / |n'|  →  positive weights ρ = Σ c_i φ_i with ∫ρT = 0
//      →  Γ(t) = ∫₀ᵗ ρT.
// The resulting (Γ, n) is an asymptotic framing with τ_g > 0.

#include "asymptote/curve.hpp"
#include "asymptote/error.hpp"
#include "asymptote/framing.hpp"
#include "asymptote/quadrature.hpp"
#include "asymptote/roots.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

namespace asym {

struct SphericalLoop {
  NormalField n;
  double sigma = 0.0;
};

/// (σ(3 + sin t) cos(5/2 cos t), σ(3 + sin t) sin(5/2 cos t), √(1 − σ²(3 + sin t)²)).
inline SphericalLoop example2_normal(double sigma) {
  if (!(sigma > 0.0)) throw Error(ErrorCode::invalid_spec, "sigma must be positive");
  if (sigma >= 0.25)
    throw Error(ErrorCode::imaginary_component,
                "sigma = " + std::to_string(sigma) + ": 1 − σ²(3 + sin t)² < 0 near t = π/2");
  NormalField n(
      [sigma](double t, int order) {
        const Series x = Series::variable(t, order);
        Series s, c;
        sincos(x, s, c);
        const Series rad = sigma * (3.0 + s);
        Series sa, ca;
        sincos(2.5 * c, sa, ca);
        return SVec3{rad * ca, rad * sa, sqrt(1.0 - rad * rad)};
      },
      NormalProvenance::analytic, "example2-normal");
  return {n, sigma};
}

inline void check_immersed(const NormalField& n, std::size_t grid = 4096) {
  for (std::size_t i = 0; i < grid; ++i) {
    const double t = kTwoPi * double(i) / double(grid);
    if (n.d1(t).norm() < 1e-10)
      throw Error(ErrorCode::not_immersed, "|n'| vanishes near t = " + std::to_string(t));
  }
}

/// T = n × n' / |n'|.  With n' = −τ_g n⊥ and n⊥ = n × T this is the unit
/// tangent for which τ_g = |n'| / |Γ'| > 0.
inline NormalField tangent_from_normal(const NormalField& n) {
  check_immersed(n);
  return NormalField(
      [n](double t, int order) {
        const SVec3 nn = n.taylor(t, order + 1);
        return normalized(truncated(cross(nn, differentiated(nn)), order));
      },
      NormalProvenance::analytic, "tangent-from-" + n.label());
}

/// Parameters where the geodesic curvature of the loop changes sign; T has
/// a cusp (T' = 0) at each of them.
inline std::vector<double> tangent_cusps(const NormalField& n, std::size_t grid = 4096) {
  auto f = [&](double t) {
    const SVec3 s = n.taylor(t, 2);
    return value(s).cross(derivative(s, 1)).dot(derivative(s, 2));
  };
  std::vector<double> out;
  for (const Bracket& b : scan_sign_changes(f, grid)) out.push_back(wrap_angle(refine_root(f, b, 1e-13)));
  return out;
}

// ---- convex hull of the tangent indicatrix --------------------------------

struct HullResult {
  bool contains = false;
  bool boundary_degenerate = false;
  double margin = 0.0;  // min over unit w of max_t ⟨T(t), w⟩
  Vec3 witness = Vec3::Zero();
};

/// The origin is interior to conv{T(t)} iff no closed half-space {⟨x,w⟩ ≤ 0}
/// contains every T(t), i.e. the support-function minimum over the sphere is
/// positive.  Fibonacci grid, then pattern search around the best point.
inline HullResult hull_contains_origin(const std::vector<Vec3>& pts, int sphere_grid = 4000) {
  if (pts.size() < 4) throw Error(ErrorCode::invalid_spec, "hull test needs at least 4 points");
  auto support = [&](const Vec3& w) {
    double m = -std::numeric_limits<double>::infinity();
    for (const Vec3& p : pts) m = std::max(m, p.dot(w));
    return m;
  };
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  HullResult best;
  best.margin = std::numeric_limits<double>::infinity();
  for (int k = 0; k < sphere_grid; ++k) {
    const double z = 1.0 - 2.0 * (k + 0.5) / sphere_grid;
    const double r = std::sqrt(1.0 - z * z);
    const Vec3 w(r * std::cos(golden * k), r * std::sin(golden * k), z);
    const double s = support(w);
    if (s < best.margin) {
      best.margin = s;
      best.witness = w;
    }
  }
  double step = 0.1;
  while (step > 1e-12) {
    const Vec3 w = best.witness;
    Vec3 a = w.unitOrthogonal(), b = w.cross(a);
    bool improved = false;
    for (int k = 0; k < 8; ++k) {
      const double ang = k * std::numbers::pi / 4;
      const Vec3 c = (w + step * (std::cos(ang) * a + std::sin(ang) * b)).normalized();
      const double s = support(c);
      if (s < best.margin) {
        best.margin = s;
        best.witness = c;
        improved = true;
      }
    }
    if (!improved) step *= 0.5;
  }
  best.boundary_degenerate = std::abs(best.margin) < 1e-9;
  best.contains = best.margin > 1e-9;
  return best;
}

inline std::vector<Vec3> sample_field(const NormalField& f, std::size_t n) {
  std::vector<Vec3> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = f.at(kTwoPi * double(i) / double(n));
  return out;
}

// ---- bump basis and closure -------------------------------------------------

struct BumpBasis {
  std::vector<double> anchors{7 * std::numbers::pi / 6, 11 * std::numbers::pi / 6, std::numbers::pi / 6,
                              5 * std::numbers::pi / 6, std::numbers::pi / 2};
  int exponent = 10;
  double offset = 1.1;

  /// ∫₀^{2π} (offset + cos t)^exponent dt; the same for every anchor.
  double normalizer() const {
    return integrate_periodic([&](double t) { return std::pow(offset + std::cos(t), exponent); });
  }
  Series phi(std::size_t i, double t, int order, double norm) const {
    return pow(offset + cos(Series::variable(t - anchors[i], order)), exponent) / norm;
  }
};

struct ClosureSolution {
  std::vector<double> coefficients;
  std::vector<Vec3> moments;  // p_i' = ∫ φ_i T
  double residual = 0.0;      // |Σ c_i p_i'|
};

namespace detail {

inline Vec3 integrate_periodic_vec(const std::function<Vec3(double)>& f, double tol = 1e-13) {
  std::size_t n = 64;
  Vec3 prev = Vec3::Zero();
  for (int level = 0; level < 16; ++level, n *= 2) {
    Vec3 s = Vec3::Zero();
    for (std::size_t i = 0; i < n; ++i) s += f(kTwoPi * double(i) / double(n));
    s *= kTwoPi / double(n);
    if (level > 0 && (s - prev).norm() <= tol * std::max(1.0, s.norm())) return s;
    prev = s;
  }
  throw Error(ErrorCode::quadrature_failure, "vector quadrature did not converge");
}

/// Lawson–Hanson non-negative least squares: min |A x − b|, x ≥ 0.
inline Eigen::VectorXd nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  const long n = A.cols();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  std::vector<bool> passive(n, false);
  for (int outer = 0; outer < 10 * n + 10; ++outer) {
    const Eigen::VectorXd w = A.transpose() * (b - A * x);
    long j = -1;
    double best = 1e-14;
    for (long k = 0; k < n; ++k)
      if (!passive[k] && w[k] > best) best = w[k], j = k;
    if (j < 0) break;
    passive[j] = true;
    for (int inner = 0; inner < 10 * n + 10; ++inner) {
      std::vector<long> idx;
      for (long k = 0; k < n; ++k)
        if (passive[k]) idx.push_back(k);
      Eigen::MatrixXd Ap(A.rows(), long(idx.size()));
      for (std::size_t k = 0; k < idx.size(); ++k) Ap.col(long(k)) = A.col(idx[k]);
      const Eigen::VectorXd z = Ap.completeOrthogonalDecomposition().solve(b);
      bool ok = true;
      for (long k = 0; k < z.size(); ++k) ok = ok && z[k] > 0;
      if (ok) {
        x.setZero();
        for (std::size_t k = 0; k < idx.size(); ++k) x[idx[k]] = z[long(k)];
        break;
      }
      double alpha = 1.0;
      for (std::size_t k = 0; k < idx.size(); ++k)
        if (z[long(k)] <= 0) alpha = std::min(alpha, x[idx[k]] / (x[idx[k]] - z[long(k)]));
      for (std::size_t k = 0; k < idx.size(); ++k) x[idx[k]] += alpha * (z[long(k)] - x[idx[k]]);
      for (long k = 0; k < n; ++k)
        if (passive[k] && x[k] <= 1e-15) passive[k] = false, x[k] = 0.0;
    }
  }
  return x;
}

}  // namespace detail

/// Positive c with Σ c_i p_i' = 0, normalized to c₁ = 1.  First choice is the
/// null-space vector nearest to (1, …, 1); if that has a non-positive entry,
/// NNLS with c₁ fixed.
inline ClosureSolution closure_coefficients(const NormalField& T, const BumpBasis& basis = {}) {
  const std::size_t k = basis.anchors.size();
  if (k < 4) throw Error(ErrorCode::invalid_spec, "closure needs at least 4 anchors");
  const double norm = basis.normalizer();
  ClosureSolution sol;
  Eigen::MatrixXd A(3, long(k));
  for (std::size_t i = 0; i < k; ++i) {
    sol.moments.push_back(detail::integrate_periodic_vec([&](double t) -> Vec3 {
      return basis.phi(i, t, 0, norm).value() * T.at(t);
    }));
    A.col(long(i)) = sol.moments.back();
  }
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(long(k));
  Eigen::VectorXd c = ones - A.transpose() * (A * A.transpose()).ldlt().solve(A * ones);
  auto positive = [](const Eigen::VectorXd& v) { return (v.array() > 1e-12).all(); };
  if (c[0] > 0) c /= c[0];
  if (!positive(c)) {
    const Eigen::MatrixXd rest = A.rightCols(long(k) - 1);
    const Eigen::VectorXd tail = detail::nnls(rest, -A.col(0));
    c = Eigen::VectorXd(long(k));
    c[0] = 1.0;
    c.tail(long(k) - 1) = tail;
  }
  sol.residual = (A * c).norm();
  if (!positive(c) || sol.residual > 1e-10)
    throw Error(ErrorCode::closure_infeasible, "no positive coefficients close the curve (residual " +
                                                   std::to_string(sol.residual) + ")");
  sol.coefficients.assign(c.data(), c.data() + c.size());
  return sol;
}

/// ρ = Σ c_i φ_i as a Series.
inline Series weight(const BumpBasis& basis, const std::vector<double>& c, double t, int order, double norm) {
  Series r(0.0, order);
  for (std::size_t i = 0; i < c.size(); ++i) r += c[i] * basis.phi(i, t, order, norm);
  return r;
}

/// Γ(t) = ∫₀ᵗ ρT.  Position from the Fourier antiderivative of ρT; the
/// higher Taylor coefficients come from ρT itself.
inline ClosedCurve integrate_curve(const BumpBasis& basis, const std::vector<double>& c, const NormalField& T,
                                   std::string name = "constructed") {
  const double norm = basis.normalizer();
  auto velocity = [basis, c, T, norm](double t, int order) {
    const Series rho = weight(basis, c, t, order, norm);
    const SVec3 tt = T.taylor(t, order);
    return SVec3{rho * tt[0], rho * tt[1], rho * tt[2]};
  };
  const Vec3 gap = detail::integrate_periodic_vec([&](double t) -> Vec3 { return value(velocity(t, 0)); });
  if (gap.norm() >= 1e-8)
    throw Error(ErrorCode::closure_failure, "closure gap " + std::to_string(gap.norm()));
  std::shared_ptr<TrigSeries3> trig;
  for (std::size_t n = 256;; n *= 2) {
    std::vector<Vec3> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = value(velocity(kTwoPi * double(i) / double(n), 0));
    auto s = std::make_shared<TrigSeries3>(TrigSeries3::interpolate(v));
    double head = 0.0, tail = 0.0;
    for (std::size_t m = 1; m <= s->modes(); ++m) {
      const auto cm = s->coefficient(m);
      const double a = std::abs(cm[0]) + std::abs(cm[1]) + std::abs(cm[2]);
      double& slot = m < s->modes() / 2 ? head : tail;
      slot = std::max(slot, a);
    }
    if (tail <= 1e-14 * head) {
      trig = std::make_shared<TrigSeries3>(s->integrated());
      break;
    }
    if (n >= (1u << 16)) throw Error(ErrorCode::quadrature_failure, "velocity spectrum does not decay");
  }
  // Γ(0) = 0
  trig->set_mean(Vec3::Zero());
  trig->set_mean(-value(trig->taylor(0.0, 0)));
  std::shared_ptr<const TrigSeries3> ctrig = trig;
  ClosedCurve curve(
      [ctrig, velocity](double t, int order) {
        const SVec3 p = ctrig->taylor(t, 0);
        if (order == 0) return p;
        const SVec3 v = velocity(t, order - 1);
        SVec3 out;
        for (int d = 0; d < 3; ++d) {
          out[d] = Series(p[d].value(), order);
          for (int k = 1; k <= order; ++k) out[d][k] = v[d][k - 1] / double(k);
        }
        return out;
      },
      CurveKind::fourier, std::move(name));
  return curve.with_trig(ctrig);
}

// ---- Example 2 pipeline ---------------------------------------------------------

struct Example2 {
  SphericalLoop loop;
  NormalField tangent;
  std::vector<double> cusps;
  HullResult hull;
  BumpBasis basis;
  ClosureSolution closure;
  ClosedCurve curve;
  std::optional<FramedCurve> framed;
};

inline constexpr double kDefaultSigma = 0.15;

inline Example2 build_example2(double sigma = kDefaultSigma, const BumpBasis& basis = {}) {
  Example2 e;
  e.loop = example2_normal(sigma);
  e.tangent = tangent_from_normal(e.loop.n);
  e.cusps = tangent_cusps(e.loop.n);
  e.hull = hull_contains_origin(sample_field(e.tangent, 1024));
  e.basis = basis;
  if (!e.hull.contains)
    throw Error(ErrorCode::closure_infeasible, "origin is not interior to the convex hull of T");
  e.closure = closure_coefficients(e.tangent, basis);
  e.curve = integrate_curve(basis, e.closure.coefficients, e.tangent, "example2");
  e.framed.emplace(e.curve, e.loop.n);
  return e;
}

}  // namespace asym
