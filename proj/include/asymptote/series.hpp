#pragma once

// Truncated Taylor series arithmetic.  A Series holds the coefficients
// c_k = f^(k)(t0) / k! of a scalar function around a point t0; arithmetic on
// Series propagates derivatives exactly (Taylor-mode automatic
// differentiation).  Curve and frame formulas are written once against this
// type and yield positions together with all required derivatives.

#include <Eigen/Core>

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>

namespace asym {

using Vec3 = Eigen::Vector3d;
using Vec2 = Eigen::Vector2d;

class Series {
 public:
  static constexpr int kMaxOrder = 14;

  Series() = default;
  Series(double value, int order) : order_(order) {
    assert(order >= 0 && order <= kMaxOrder);
    c_[0] = value;
  }

  /// The independent variable t0 + h.
  static Series variable(double t0, int order) {
    Series s(t0, order);
    if (order >= 1) s.c_[1] = 1.0;
    return s;
  }

  int order() const { return order_; }
  double value() const { return c_[0]; }
  double operator[](int k) const { return c_[k]; }
  double& operator[](int k) { return c_[k]; }

  /// k-th derivative at the expansion point.
  double derivative(int k) const {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return c_[k] * f;
  }

  /// Series of the derivative, one order lower.
  Series differentiated() const {
    Series d(0.0, std::max(order_ - 1, 0));
    for (int k = 0; k < order_; ++k) d.c_[k] = (k + 1) * c_[k + 1];
    return d;
  }

  /// Evaluate the truncated polynomial at offset h.
  double eval(double h) const {
    double acc = 0.0;
    for (int k = order_; k >= 0; --k) acc = acc * h + c_[k];
    return acc;
  }

  Series truncated(int order) const {
    Series s = *this;
    for (int k = order + 1; k <= s.order_; ++k) s.c_[k] = 0.0;
    s.order_ = std::min(order, order_);
    return s;
  }

  Series operator-() const {
    Series r = *this;
    for (int k = 0; k <= order_; ++k) r.c_[k] = -c_[k];
    return r;
  }

  Series& operator+=(const Series& o) {
    order_ = std::min(order_, o.order_);
    for (int k = 0; k <= order_; ++k) c_[k] += o.c_[k];
    for (int k = order_ + 1; k <= kMaxOrder; ++k) c_[k] = 0.0;
    return *this;
  }
  Series& operator-=(const Series& o) { return *this += -o; }
  Series& operator+=(double a) { c_[0] += a; return *this; }
  Series& operator-=(double a) { c_[0] -= a; return *this; }
  Series& operator*=(double a) {
    for (int k = 0; k <= order_; ++k) c_[k] *= a;
    return *this;
  }
  Series& operator/=(double a) { return *this *= 1.0 / a; }

  friend Series operator+(Series a, const Series& b) { return a += b; }
  friend Series operator-(Series a, const Series& b) { return a -= b; }
  friend Series operator+(Series a, double b) { return a += b; }
  friend Series operator+(double b, Series a) { return a += b; }
  friend Series operator-(Series a, double b) { return a -= b; }
  friend Series operator-(double b, const Series& a) { return (-a) += b; }
  friend Series operator*(Series a, double b) { return a *= b; }
  friend Series operator*(double b, Series a) { return a *= b; }
  friend Series operator/(Series a, double b) { return a /= b; }

  friend Series operator*(const Series& a, const Series& b) {
    Series r(0.0, std::min(a.order_, b.order_));
    for (int k = 0; k <= r.order_; ++k) {
      double acc = 0.0;
      for (int i = 0; i <= k; ++i) acc += a.c_[i] * b.c_[k - i];
      r.c_[k] = acc;
    }
    return r;
  }

  friend Series operator/(const Series& a, const Series& b) {
    Series q(0.0, std::min(a.order_, b.order_));
    const double b0 = b.c_[0];
    for (int k = 0; k <= q.order_; ++k) {
      double acc = a.c_[k];
      for (int i = 1; i <= k; ++i) acc -= b.c_[i] * q.c_[k - i];
      q.c_[k] = acc / b0;
    }
    return q;
  }

  friend Series operator/(double a, const Series& b) { return Series(a, b.order_) / b; }

  friend Series sqrt(const Series& a) {
    Series s(0.0, a.order_);
    s.c_[0] = std::sqrt(a.c_[0]);
    for (int k = 1; k <= a.order_; ++k) {
      double acc = a.c_[k];
      for (int i = 1; i < k; ++i) acc -= s.c_[i] * s.c_[k - i];
      s.c_[k] = acc / (2.0 * s.c_[0]);
    }
    return s;
  }

  /// sin and cos computed together through the coupled recurrence.
  friend void sincos(const Series& a, Series& s, Series& c) {
    s = Series(std::sin(a.c_[0]), a.order_);
    c = Series(std::cos(a.c_[0]), a.order_);
    for (int k = 1; k <= a.order_; ++k) {
      double as = 0.0, ac = 0.0;
      for (int j = 1; j <= k; ++j) {
        as += j * a.c_[j] * c.c_[k - j];
        ac += j * a.c_[j] * s.c_[k - j];
      }
      s.c_[k] = as / k;
      c.c_[k] = -ac / k;
    }
  }
  friend Series sin(const Series& a) {
    Series s, c;
    sincos(a, s, c);
    return s;
  }
  friend Series cos(const Series& a) {
    Series s, c;
    sincos(a, s, c);
    return c;
  }

  friend Series exp(const Series& a) {
    Series e(std::exp(a.c_[0]), a.order_);
    for (int k = 1; k <= a.order_; ++k) {
      double acc = 0.0;
      for (int j = 1; j <= k; ++j) acc += j * a.c_[j] * e.c_[k - j];
      e.c_[k] = acc / k;
    }
    return e;
  }

  friend Series pow(const Series& a, int n) {
    Series r(1.0, a.order_);
    Series base = a;
    while (n > 0) {
      if (n & 1) r = r * base;
      n >>= 1;
      if (n) base = base * base;
    }
    return r;
  }

 private:
  std::array<double, kMaxOrder + 1> c_{};
  int order_ = 0;
};

/// Vector-valued series: one Series per Cartesian component.
using SVec3 = std::array<Series, 3>;

inline SVec3 constant(const Vec3& v, int order) {
  return {Series(v.x(), order), Series(v.y(), order), Series(v.z(), order)};
}
inline SVec3 operator+(const SVec3& a, const SVec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline SVec3 operator-(const SVec3& a, const SVec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline SVec3 operator-(const SVec3& a) { return {-a[0], -a[1], -a[2]}; }
inline SVec3 operator*(const Series& s, const SVec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline SVec3 operator*(double s, const SVec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline SVec3 operator/(const SVec3& a, const Series& s) { return {a[0] / s, a[1] / s, a[2] / s}; }
inline Series dot(const SVec3& a, const SVec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline SVec3 cross(const SVec3& a, const SVec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
inline Series norm(const SVec3& a) { return sqrt(dot(a, a)); }
inline SVec3 normalized(const SVec3& a) { return a / norm(a); }
inline SVec3 differentiated(const SVec3& a) {
  return {a[0].differentiated(), a[1].differentiated(), a[2].differentiated()};
}
inline SVec3 truncated(const SVec3& a, int order) {
  return {a[0].truncated(order), a[1].truncated(order), a[2].truncated(order)};
}
inline int order_of(const SVec3& a) { return std::min({a[0].order(), a[1].order(), a[2].order()}); }

/// Value of the k-th derivative of a vector series.
inline Vec3 derivative(const SVec3& a, int k) {
  return {a[0].derivative(k), a[1].derivative(k), a[2].derivative(k)};
}
inline Vec3 value(const SVec3& a) { return {a[0].value(), a[1].value(), a[2].value()}; }

/// Re-expand a series around a shifted point t0 + h, keeping `order` terms.
/// Exact for the truncated polynomial.
inline Series shifted(const Series& a, double h, int order) {
  Series x = Series::variable(h, order);
  Series acc(0.0, order);
  for (int k = a.order(); k >= 0; --k) acc = acc * x + a[k];
  return acc;
}

}  // namespace asym
