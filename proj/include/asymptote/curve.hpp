#pragma once

// Closed space curves.  A ClosedCurve is a 2π-periodic map t ↦ Γ(t) that
// can report a Taylor expansion of any order at any t.  Downstream frame
// formulas use the chain rule on |Γ'| rather than a unit-speed
// reparametrization.

#include "asymptote/error.hpp"
#include "asymptote/fourier.hpp"
#include "asymptote/series.hpp"

#include <Eigen/Geometry>

#include <functional>
#include <memory>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

namespace asym {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

enum class CurveKind { analytic_builtin, fourier };

using Params = std::vector<std::pair<std::string, double>>;

/// Taylor expansion of a vector function of t up to the requested order.
using TaylorFn = std::function<SVec3(double t, int order)>;

struct CurveJet {
  Vec3 position = Vec3::Zero();
  Vec3 d1 = Vec3::Zero();
  Vec3 d2 = Vec3::Zero();
  Vec3 d3 = Vec3::Zero();
  int order = 0;
};

class ClosedCurve {
 public:
  ClosedCurve() = default;
  ClosedCurve(TaylorFn fn, CurveKind kind, std::string name, Params params = {})
      : fn_(std::make_shared<TaylorFn>(std::move(fn))), kind_(kind), name_(std::move(name)),
        params_(std::move(params)) {}

  /// Taylor coefficients at t.  Internal callers may ask for orders above 3
  /// (frame derivatives need them); the public jet is capped at 3.
  SVec3 taylor(double t, int order) const { return (*fn_)(t, order); }

  Vec3 position(double t) const { return value(taylor(t, 0)); }
  Vec3 derivative(double t, int k) const { return asym::derivative(taylor(t, k), k); }

  CurveKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  const Params& params() const { return params_; }
  bool valid() const { return static_cast<bool>(fn_); }

  /// Fourier data when the curve came from a fit (null otherwise).
  std::shared_ptr<const TrigSeries3> trig() const { return trig_; }
  ClosedCurve with_trig(std::shared_ptr<const TrigSeries3> t) const {
    ClosedCurve c = *this;
    c.trig_ = std::move(t);
    return c;
  }

 private:
  std::shared_ptr<const TaylorFn> fn_;
  CurveKind kind_ = CurveKind::analytic_builtin;
  std::string name_;
  Params params_;
  std::shared_ptr<const TrigSeries3> trig_;
};

inline CurveJet evaluate(const ClosedCurve& curve, double t, int order) {
  if (order < 0 || order > 3)
    throw Error(ErrorCode::unsupported_order, "jet order " + std::to_string(order) + " (supported: 0..3)");
  const SVec3 s = curve.taylor(t, order);
  CurveJet j;
  j.order = order;
  j.position = value(s);
  if (order >= 1) j.d1 = derivative(s, 1);
  if (order >= 2) j.d2 = derivative(s, 2);
  if (order >= 3) j.d3 = derivative(s, 3);
  return j;
}

/// Positions (k = 0) or k-th derivatives on the uniform grid t_j = 2πj/n.
inline std::vector<Vec3> sample(const ClosedCurve& curve, std::size_t n, int k = 0) {
  std::vector<Vec3> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double t = kTwoPi * double(j) / double(n);
    out[j] = k == 0 ? curve.position(t) : curve.derivative(t, k);
  }
  return out;
}

inline double min_speed(const ClosedCurve& curve, std::size_t n = 4096) {
  double m = std::numeric_limits<double>::infinity();
  for (const Vec3& d : sample(curve, n, 1)) m = std::min(m, d.norm());
  return m;
}

/// Largest pairwise distance between n sample points.
inline double diameter(const ClosedCurve& curve, std::size_t n = 512) {
  const auto p = sample(curve, n);
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) d = std::max(d, (p[i] - p[j]).norm());
  return d;
}

/// Trigonometric interpolant of samples taken at t_j = 2πj/N.
inline ClosedCurve fourier_fit(const std::vector<Vec3>& samples, std::string name = "fourier") {
  const std::size_t n = samples.size();
  if (n < 16 || n % 2 != 0)
    throw Error(ErrorCode::invalid_spec, "fourier_fit needs an even sample count >= 16, got " + std::to_string(n));
  auto trig = std::make_shared<const TrigSeries3>(TrigSeries3::interpolate(samples, true));
  ClosedCurve c([trig](double t, int order) { return trig->taylor(t, order); }, CurveKind::fourier, std::move(name),
                {{"samples", double(n)}});
  c = c.with_trig(trig);
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const Vec3& d : sample(c, 4 * n, 1)) {
    lo = std::min(lo, d.norm());
    hi = std::max(hi, d.norm());
  }
  if (!(lo > 1e-8 * hi))
    throw Error(ErrorCode::irregular_curve, "fitted curve has min |Γ'| = " + std::to_string(lo));
  return c;
}

// ---- rigid motions, scaling and reversal --------------------------------

inline ClosedCurve transformed(const ClosedCurve& curve, const Eigen::Matrix3d& rot, const Vec3& shift) {
  return ClosedCurve(
      [curve, rot, shift](double t, int order) {
        const SVec3 s = curve.taylor(t, order);
        SVec3 out;
        for (int i = 0; i < 3; ++i) {
          out[i] = Series(shift[i], order);
          for (int j = 0; j < 3; ++j) out[i] += rot(i, j) * s[j];
        }
        return out;
      },
      curve.kind(), curve.name() + "/moved", curve.params());
}

inline ClosedCurve scaled(const ClosedCurve& curve, double lambda) {
  return transformed(curve, lambda * Eigen::Matrix3d::Identity(), Vec3::Zero());
}

/// Γ(−t): the same point set traversed backwards.
inline ClosedCurve reversed(const ClosedCurve& curve) {
  return ClosedCurve(
      [curve](double t, int order) {
        SVec3 s = curve.taylor(-t, order);
        for (auto& c : s)
          for (int k = 1; k <= order; k += 2) c[k] = -c[k];
        return s;
      },
      curve.kind(), curve.name() + "/reversed", curve.params());
}

}  // namespace asym
