#pragma once

// Planar projections Γ_u, their crossings and planar differential data.

#include "asymptote/curve.hpp"
#include "asymptote/error.hpp"
#include "asymptote/framing.hpp"
#include "asymptote/parallel.hpp"
#include "asymptote/roots.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <optional>
#include <random>
#include <unordered_map>
#include <vector>

namespace asym {

// ---- directions ----------------------------------------------------------

struct Direction {
  Vec3 u = Vec3::UnitZ();
  Vec3 e1 = Vec3::UnitX();
  Vec3 e2 = Vec3::UnitY();  // e1 × e2 = u
};

inline Direction make_direction(const Vec3& v) {
  Direction d;
  d.u = v.normalized();
  Vec3 a = d.u.cross(Vec3::UnitZ());
  if (a.norm() < 1e-6) a = d.u.cross(Vec3::UnitX());
  d.e1 = a.normalized();
  d.e2 = d.u.cross(d.e1);
  return d;
}

// ---- cached samples ------------------------------------------------------

/// Positions and first derivatives of a curve on a uniform grid, shared by
/// every projection of the same curve.
struct SampledCurve {
  ClosedCurve curve;
  std::size_t n = 0;
  std::vector<Vec3> pos, d1;

  static std::shared_ptr<const SampledCurve> make(const ClosedCurve& c, std::size_t n = 4096) {
    auto s = std::make_shared<SampledCurve>();
    s->curve = c;
    s->n = n;
    s->pos.resize(n);
    s->d1.resize(n);
    parallel::for_chunks(n, [&](std::size_t b, std::size_t e, std::size_t) {
      for (std::size_t i = b; i < e; ++i) {
        const SVec3 g = c.taylor(kTwoPi * double(i) / double(n), 1);
        s->pos[i] = value(g);
        s->d1[i] = derivative(g, 1);
      }
    });
    return s;
  }
  double t(std::size_t i) const { return kTwoPi * double(i) / double(n); }
};

inline double det2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

class PlanarProjection {
 public:
  PlanarProjection(std::shared_ptr<const SampledCurve> samples, Direction dir)
      : s_(std::move(samples)), dir_(std::move(dir)) {}

  const ClosedCurve& curve() const { return s_->curve; }
  const Direction& direction() const { return dir_; }
  const SampledCurve& samples() const { return *s_; }
  std::shared_ptr<const SampledCurve> shared_samples() const { return s_; }

  Vec2 flat(const Vec3& v) const { return {v.dot(dir_.e1), v.dot(dir_.e2)}; }
  Vec2 point(double t) const { return flat(curve().position(t)); }
  Vec2 d1(double t) const { return flat(curve().derivative(t, 1)); }
  double height(double t) const { return curve().position(t).dot(dir_.u); }

  /// (point, first, second derivative) at t.
  std::array<Vec2, 3> jet(double t) const {
    const SVec3 g = curve().taylor(t, 2);
    return {flat(value(g)), flat(derivative(g, 1)), flat(derivative(g, 2))};
  }

  Vec2 sample_point(std::size_t i) const { return flat(s_->pos[i]); }
  Vec2 sample_d1(std::size_t i) const { return flat(s_->d1[i]); }

 private:
  std::shared_ptr<const SampledCurve> s_;
  Direction dir_;
};

inline PlanarProjection project(const ClosedCurve& curve, const Vec3& u, std::size_t n = 4096) {
  return PlanarProjection(SampledCurve::make(curve, n), make_direction(u));
}
inline PlanarProjection project(std::shared_ptr<const SampledCurve> s, const Vec3& u) {
  return PlanarProjection(std::move(s), make_direction(u));
}

// ---- crossings -----------------------------------------------------------

enum class CrossingKind { self, local, nonlocal };

inline const char* to_string(CrossingKind k) {
  switch (k) {
    case CrossingKind::self: return "self";
    case CrossingKind::local: return "local";
    case CrossingKind::nonlocal: return "nonlocal";
  }
  return "?";
}

struct Crossing {
  double t_plus = 0.0;   // parameter on the upper strand
  double t_minus = 0.0;  // parameter on the lower strand
  Vec2 point = Vec2::Zero();
  int sign = 0;
  CrossingKind kind = CrossingKind::self;
  double angle = 0.0;       // angle between the projected tangents
  double height_gap = 0.0;  // h(t_plus) − h(t_minus)
};

struct CrossingOptions {
  double min_angle = 1e-4;       // rad; below → non-generic-direction
  double min_height_gap = 1e-10;
  double newton_tol = 1e-11;
  double merge_tol = 1e-8;
  bool negate_sign = false;      // mutation hook for tests: flips every sign
};

namespace detail {

struct SegmentHit {
  std::size_t i, j;  // segment indices on the first and second polyline
  double a, b;       // fractional positions along each segment
};

inline bool segment_intersection(const Vec2& p, const Vec2& p2, const Vec2& q, const Vec2& q2, double& a, double& b) {
  const Vec2 r = p2 - p, s = q2 - q;
  const double den = det2(r, s);
  if (den == 0.0) return false;
  const Vec2 qp = q - p;
  a = det2(qp, s) / den;
  b = det2(qp, r) / den;
  // closed with slack: a crossing exactly at a sample vertex must not slip
  // between neighbouring segments; duplicates are merged after refinement
  constexpr double slack = 1e-9;
  return a >= -slack && a <= 1.0 + slack && b >= -slack && b <= 1.0 + slack;
}

/// All intersections between the closed polylines P and Q (or of P with
/// itself when `same` is set, skipping adjacent segments), using a uniform
/// bucket grid sized to the longest segment.
inline std::vector<SegmentHit> polyline_intersections(const std::vector<Vec2>& P, const std::vector<Vec2>& Q,
                                                      bool same) {
  const std::size_t n = P.size(), m = Q.size();
  double seg = 0.0;
  Vec2 lo = P[0], hi = P[0];
  for (std::size_t i = 0; i < n; ++i) {
    seg = std::max(seg, (P[(i + 1) % n] - P[i]).norm());
    lo = lo.cwiseMin(P[i]);
    hi = hi.cwiseMax(P[i]);
  }
  for (std::size_t j = 0; j < m; ++j) {
    seg = std::max(seg, (Q[(j + 1) % m] - Q[j]).norm());
    lo = lo.cwiseMin(Q[j]);
    hi = hi.cwiseMax(Q[j]);
  }
  const double cell = std::max(seg, 1e-12 * std::max(1.0, (hi - lo).norm()));
  auto key = [&](long x, long y) { return (x << 32) ^ (y & 0xffffffffL); };
  auto cell_of = [&](double v, double o) { return long(std::floor((v - o) / cell)); };
  std::unordered_map<long, std::vector<std::size_t>> grid;
  for (std::size_t j = 0; j < m; ++j) {
    const Vec2 a = Q[j], b = Q[(j + 1) % m];
    for (long x = cell_of(std::min(a.x(), b.x()), lo.x()); x <= cell_of(std::max(a.x(), b.x()), lo.x()); ++x)
      for (long y = cell_of(std::min(a.y(), b.y()), lo.y()); y <= cell_of(std::max(a.y(), b.y()), lo.y()); ++y)
        grid[key(x, y)].push_back(j);
  }
  std::vector<SegmentHit> hits;
  std::vector<std::size_t> seen;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = P[i], b = P[(i + 1) % n];
    seen.clear();
    for (long x = cell_of(std::min(a.x(), b.x()), lo.x()); x <= cell_of(std::max(a.x(), b.x()), lo.x()); ++x)
      for (long y = cell_of(std::min(a.y(), b.y()), lo.y()); y <= cell_of(std::max(a.y(), b.y()), lo.y()); ++y) {
        auto it = grid.find(key(x, y));
        if (it == grid.end()) continue;
        for (std::size_t j : it->second) {
          if (same) {
            if (j <= i) continue;
            const std::size_t gap = std::min(j - i, n - (j - i));
            if (gap < 2) continue;
          }
          if (std::find(seen.begin(), seen.end(), j) != seen.end()) continue;
          seen.push_back(j);
          double sa, sb;
          if (segment_intersection(a, b, Q[j], Q[(j + 1) % m], sa, sb)) hits.push_back({i, j, sa, sb});
        }
      }
  }
  return hits;
}

}  // namespace detail

/// Refine a crossing between two parametrized planar curves by damped
/// Newton on F(s,t) = A(s) − B(t).  Returns false on failure.
template <class FA, class FB>
bool refine_crossing(const FA& A, const FB& B, double& s, double& t, double tol) {
  for (int it = 0; it < 60; ++it) {
    const auto [pa, da] = A(s);
    const auto [pb, db] = B(t);
    const Vec2 F = pa - pb;
    const double f = F.norm();
    if (f < tol) return true;
    Eigen::Matrix2d J;
    J.col(0) = da;
    J.col(1) = -db;
    if (std::abs(J.determinant()) < 1e-300) return false;
    const Eigen::Vector2d step = J.lu().solve(F);
    double lambda = 1.0;
    for (int k = 0; k < 30; ++k) {
      const double s2 = s - lambda * step[0], t2 = t - lambda * step[1];
      if ((A(s2).first - B(t2).first).norm() < f || k == 29) {
        s = s2;
        t = t2;
        break;
      }
      lambda *= 0.5;
    }
  }
  const Vec2 F = A(s).first - B(t).first;
  return F.norm() < tol;
}

/// Transversal double points of Γ_u.  Candidates come from the sampled
/// polyline and are refined on the smooth curve.
inline std::vector<Crossing> self_crossings(const PlanarProjection& proj, const CrossingOptions& opt = {}) {
  const SampledCurve& sc = proj.samples();
  const std::size_t n = sc.n;
  std::vector<Vec2> P(n);
  for (std::size_t i = 0; i < n; ++i) P[i] = proj.sample_point(i);
  const auto hits = detail::polyline_intersections(P, P, true);
  const double h = kTwoPi / double(n);
  auto eval = [&](double t) {
    const SVec3 g = proj.curve().taylor(t, 1);
    return std::pair<Vec2, Vec2>{proj.flat(value(g)), proj.flat(derivative(g, 1))};
  };
  std::vector<Crossing> out;
  for (const auto& hit : hits) {
    double s = h * (double(hit.i) + hit.a), t = h * (double(hit.j) + hit.b);
    if (!refine_crossing(eval, eval, s, t, opt.newton_tol))
      throw Error(ErrorCode::non_generic_direction, "crossing refinement failed near t = " + std::to_string(s));
    s = wrap_angle(s);
    t = wrap_angle(t);
    if (std::abs(circular_diff(s, t)) < 1e-6)
      throw Error(ErrorCode::non_generic_direction, "crossing collapsed onto a single parameter (cusp-like)");
    bool dup = false;
    for (const auto& c : out) {
      const bool same = std::abs(circular_diff(c.t_plus, s)) < opt.merge_tol && std::abs(circular_diff(c.t_minus, t)) < opt.merge_tol;
      const bool swapped = std::abs(circular_diff(c.t_plus, t)) < opt.merge_tol && std::abs(circular_diff(c.t_minus, s)) < opt.merge_tol;
      if (same || swapped) dup = true;
    }
    if (dup) continue;
    const double hs = proj.height(s), ht = proj.height(t);
    Crossing c;
    c.kind = CrossingKind::self;
    c.t_plus = hs > ht ? s : t;
    c.t_minus = hs > ht ? t : s;
    c.height_gap = std::abs(hs - ht);
    const Vec2 up = proj.d1(c.t_plus), dn = proj.d1(c.t_minus);
    const double d = det2(up, dn);
    c.angle = std::asin(std::min(1.0, std::abs(d) / (up.norm() * dn.norm())));
    c.point = 0.5 * (proj.point(s) + proj.point(t));
    if (c.angle < opt.min_angle)
      throw Error(ErrorCode::non_generic_direction, "near-tangential crossing (angle " + std::to_string(c.angle) + ")");
    if (c.height_gap < opt.min_height_gap)
      throw Error(ErrorCode::non_generic_direction, "strands meet in space at a crossing");
    c.sign = d > 0 ? 1 : -1;
    if (opt.negate_sign) c.sign = -c.sign;
    out.push_back(c);
  }
  std::sort(out.begin(), out.end(), [](const Crossing& a, const Crossing& b) {
    return std::tie(a.t_plus, a.t_minus) < std::tie(b.t_plus, b.t_minus);
  });
  return out;
}

inline int crossing_number(const std::vector<Crossing>& cs) {
  int s = 0;
  for (const auto& c : cs) s += c.sign;
  return s;
}
inline int crossing_number(const PlanarProjection& proj, const CrossingOptions& opt = {}) {
  return crossing_number(self_crossings(proj, opt));
}

// ---- ribbon crossings ------------------------------------------------------

struct RibbonCrossings {
  int total = 0, local = 0, nonlocal = 0;
  int self = 0;  // Cr(Γ_u)
  double epsilon = 0.0;
  int retries = 0;
  bool consistent = false;  // nonlocal == 2 · self
  std::vector<Crossing> crossings;
};

struct RibbonOptions {
  double epsilon = 0.0;  // 0 → 1e-3 × diameter
  int max_retries = 5;
  std::size_t samples = 4096;
  int max_refinements = 2;  // sample doublings once the ε halvings run out
  CrossingOptions crossing;
};

/// Crossings between Γ_u and (Γ + εv)_u, split into local ones (the two
/// parameters agree up to O(ε)) and nonlocal ones (near a self-crossing of
/// Γ_u).  A crossing that fits both or neither description is ambiguous and
/// triggers a retry with ε halved.
namespace detail {
inline RibbonCrossings ribbon_crossings_at(const ClosedCurve& curve, const NormalField& v, const Vec3& u,
                                           const RibbonOptions& opt) {
  const Direction dir = make_direction(u);
  auto base = SampledCurve::make(curve, opt.samples);
  const PlanarProjection proj(base, dir);
  const auto selfs = self_crossings(proj, opt.crossing);
  double eps = opt.epsilon > 0 ? opt.epsilon : 1e-3 * diameter(curve);
  double min_speed = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < base->n; ++i) min_speed = std::min(min_speed, proj.sample_d1(i).norm());

  // each transversal zero of det(Γ_u', v_u) carries exactly one local crossing
  // once ε is small enough; the count is an independent check on the detector
  int expected_local = 0;
  {
    auto g = [&](double t) {
      const SVec3 d = curve.taylor(t, 1);
      return det2(proj.flat(derivative(d, 1)), proj.flat(v.at(t)));
    };
    expected_local = static_cast<int>(scan_sign_changes(g, 4 * base->n).size());
  }

  for (int attempt = 0; attempt <= opt.max_retries; ++attempt, eps *= 0.5) {
    // disjointness: min distance between Γ and Γ+εv must exceed ε/2
    const std::size_t n = base->n;
    std::vector<Vec2> P(n), Q(n);
    std::vector<Vec3> pushed(n);
    for (std::size_t i = 0; i < n; ++i) {
      pushed[i] = base->pos[i] + eps * v.at(base->t(i));
      P[i] = proj.sample_point(i);
      Q[i] = proj.flat(pushed[i]);
    }
    auto evalA = [&](double t) {
      const SVec3 g = curve.taylor(t, 1);
      return std::pair<Vec2, Vec2>{proj.flat(value(g)), proj.flat(derivative(g, 1))};
    };
    auto evalB = [&](double t) {
      const SVec3 g = curve.taylor(t, 1);
      const SVec3 w = v.taylor(t, 1);
      return std::pair<Vec2, Vec2>{proj.flat(value(g) + eps * value(w)),
                                   proj.flat(derivative(g, 1) + eps * derivative(w, 1))};
    };
    const double h = kTwoPi / double(n);
    // classification scale in parameter units
    const double local_scale = 50.0 * eps / min_speed;
    RibbonCrossings r;
    r.epsilon = eps;
    r.retries = attempt;
    r.self = crossing_number(selfs);
    bool ambiguous = false;
    for (const auto& hit : detail::polyline_intersections(P, Q, false)) {
      double s = h * (double(hit.i) + hit.a), t = h * (double(hit.j) + hit.b);
      if (!refine_crossing(evalA, evalB, s, t, opt.crossing.newton_tol)) {
        ambiguous = true;
        break;
      }
      s = wrap_angle(s);
      t = wrap_angle(t);
      bool dup = false;
      const Vec3 xa = curve.position(s), xb = curve.position(t) + eps * v.at(t);
      const double ha = xa.dot(dir.u), hb = xb.dot(dir.u);
      Crossing c;
      // t_plus/t_minus carry (s on Γ, t on Γ+εv) ordered by height
      c.t_plus = ha > hb ? s : t;
      c.t_minus = ha > hb ? t : s;
      for (const auto& o : r.crossings)
        if (std::abs(circular_diff(o.t_plus, c.t_plus)) < 1e-9 && std::abs(circular_diff(o.t_minus, c.t_minus)) < 1e-9)
          dup = true;
      if (dup) continue;
      c.height_gap = std::abs(ha - hb);
      const Vec2 da = evalA(s).second, db = evalB(t).second;
      const Vec2 up = ha > hb ? da : db, dn = ha > hb ? db : da;
      const double d = det2(up, dn);
      c.angle = std::asin(std::min(1.0, std::abs(d) / (up.norm() * dn.norm())));
      c.point = evalA(s).first;
      c.sign = d > 0 ? 1 : -1;
      if (opt.crossing.negate_sign) c.sign = -c.sign;
      const bool is_local = std::abs(circular_diff(s, t)) < local_scale;
      bool is_nonlocal = false;
      for (const auto& x : selfs) {
        const bool near1 = std::abs(circular_diff(s, x.t_plus)) < local_scale && std::abs(circular_diff(t, x.t_minus)) < local_scale;
        const bool near2 = std::abs(circular_diff(s, x.t_minus)) < local_scale && std::abs(circular_diff(t, x.t_plus)) < local_scale;
        if (near1 || near2) is_nonlocal = true;
      }
      // local crossings meet at an angle of order ε, so only nonlocal ones
      // are held to the transversality threshold
      const double min_angle = is_local ? 1e-9 : opt.crossing.min_angle;
      if (is_local == is_nonlocal || c.angle < min_angle || c.height_gap < opt.crossing.min_height_gap) {
        ambiguous = true;
        break;
      }
      c.kind = is_local ? CrossingKind::local : CrossingKind::nonlocal;
      r.crossings.push_back(c);
      r.total += c.sign;
      (is_local ? r.local : r.nonlocal) += c.sign;
    }
    if (ambiguous) continue;
    int local_count = 0;
    for (const auto& c : r.crossings) local_count += c.kind == CrossingKind::local;
    if (local_count != expected_local) continue;
    // pushed curve must stay clear of Γ
    double dmin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; i += 1)
      for (std::size_t j = 0; j < n; j += 8) dmin = std::min(dmin, (pushed[i] - base->pos[j]).squaredNorm());
    if (std::sqrt(dmin) < 0.5 * eps * 0.999) continue;
    r.consistent = r.nonlocal == 2 * r.self;
    std::sort(r.crossings.begin(), r.crossings.end(), [](const Crossing& a, const Crossing& b) {
      return std::tie(a.t_plus, a.t_minus) < std::tie(b.t_plus, b.t_minus);
    });
    return r;
  }
  throw Error(ErrorCode::epsilon_resolution_failure,
              "ribbon crossings stayed ambiguous after " + std::to_string(opt.max_retries) + " halvings of ε");
}
}  // namespace detail

inline RibbonCrossings ribbon_crossings(const ClosedCurve& curve, const NormalField& v, const Vec3& u,
                                        const RibbonOptions& opt = {}) {
  RibbonOptions o = opt;
  for (int k = 0;; ++k, o.samples *= 2) {
    try {
      return detail::ribbon_crossings_at(curve, v, u, o);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::epsilon_resolution_failure || k >= opt.max_refinements) throw;
    }
  }
}

// ---- zeros of ⟨u, n⟩ -------------------------------------------------------

struct NormalZeros {
  int count = 0;
  std::vector<double> zeros;
  std::vector<double> slopes;  // d⟨u,n⟩/dt at each zero
};

inline NormalZeros normal_direction_zeros(const NormalField& n, const Vec3& u, std::size_t grid = 4096,
                                          double min_slope = 1e-8) {
  auto f = [&](double t) { return n.at(t).dot(u); };
  NormalZeros out;
  for (const Bracket& b : scan_sign_changes(f, grid)) {
    const double z = wrap_angle(refine_root(f, b, 1e-13));
    const double slope = n.d1(z).dot(u);
    if (std::abs(slope) <= min_slope)
      throw Error(ErrorCode::non_generic_direction, "tangential zero of <u,n> at t = " + std::to_string(z));
    out.zeros.push_back(z);
    out.slopes.push_back(slope);
  }
  out.count = static_cast<int>(out.zeros.size());
  return out;
}

// ---- rotation index and planar inflections ------------------------------------

inline int rotation_index(const PlanarProjection& proj, std::size_t start = 1024, std::size_t max_grid = 1 << 20) {
  for (std::size_t n = start; n <= max_grid; n *= 2) {
    double total = 0.0, worst = 0.0;
    Vec2 prev = proj.d1(0.0);
    for (std::size_t i = 1; i <= n; ++i) {
      const Vec2 cur = proj.d1(kTwoPi * double(i) / double(n));
      const double step = std::atan2(det2(prev, cur), prev.dot(cur));
      worst = std::max(worst, std::abs(step));
      total += step;
      prev = cur;
    }
    if (worst < std::numbers::pi / 4) return static_cast<int>(std::lround(total / kTwoPi));
  }
  throw Error(ErrorCode::resolution_failure, "tangent angle steps stayed >= π/4 at maximum grid density");
}

struct PlanarInflections {
  int count = 0;
  std::vector<double> params;
};

inline PlanarInflections planar_inflections(const PlanarProjection& proj, std::size_t grid = 4096) {
  auto g = [&](double t) {
    const auto j = proj.jet(t);
    const double sp = j[1].norm();
    return det2(j[1], j[2]) / (sp * sp * sp);  // signed planar curvature
  };
  PlanarInflections out;
  for (const Bracket& b : scan_sign_changes(g, grid)) {
    const double z = wrap_angle(refine_root(g, b, 1e-12));
    const double d = 1e-6;
    const double slope = (g(z + d) - g(z - d)) / (2 * d);
    if (std::abs(slope) < 1e-9)
      throw Error(ErrorCode::non_generic_direction, "tangential planar inflection at t = " + std::to_string(z));
    out.params.push_back(z);
  }
  out.count = static_cast<int>(out.params.size());
  return out;
}

// ---- star-shapedness -------------------------------------------------------

struct StarshapedResult {
  std::optional<Vec2> witness;  // a point on no tangent line
  int points_tested = 0;
  bool sampled_verdict = true;  // "none" is a sampled conclusion, not a proof
};

/// Search for a point p with det(Γ_u(t) − p, Γ_u'(t)) of one sign for all t.
inline StarshapedResult locally_starshaped(const PlanarProjection& proj, int grid = 64, std::size_t samples = 4096) {
  std::vector<Vec2> P(samples), D(samples);
  Vec2 lo(1e300, 1e300), hi(-1e300, -1e300), centroid = Vec2::Zero();
  for (std::size_t i = 0; i < samples; ++i) {
    const double t = kTwoPi * double(i) / double(samples);
    const auto j = proj.jet(t);
    P[i] = j[0];
    D[i] = j[1];
    lo = lo.cwiseMin(P[i]);
    hi = hi.cwiseMax(P[i]);
    centroid += P[i] / double(samples);
  }
  const Vec2 mid = 0.5 * (lo + hi), half = 0.75 * (hi - lo);
  std::vector<Vec2> cand{centroid, mid};
  for (int a = 0; a < grid; ++a)
    for (int b = 0; b < grid; ++b)
      cand.emplace_back(mid.x() - half.x() + 2 * half.x() * (a + 0.5) / grid,
                        mid.y() - half.y() + 2 * half.y() * (b + 0.5) / grid);

  auto sampled_ok = [&](const Vec2& p, std::size_t& argmin) {
    double sgn = 0.0, best = 1e300;
    for (std::size_t i = 0; i < samples; ++i) {
      const double g = det2(P[i] - p, D[i]);
      if (g == 0.0) return false;
      if (sgn == 0.0) sgn = g;
      if ((g < 0) != (sgn < 0)) return false;
      if (std::abs(g) < best) {
        best = std::abs(g);
        argmin = i;
      }
    }
    return true;
  };
  // refine near the sampled minimum of |g_p| on the smooth curve
  auto refined_ok = [&](const Vec2& p, std::size_t argmin) {
    auto g = [&](double t) {
      const auto j = proj.jet(t);
      return det2(j[0] - p, j[1]);
    };
    const double h = kTwoPi / double(samples);
    const double t0 = h * double(argmin);
    const double ref = g(t0);
    for (int k = -16; k <= 16; ++k)
      if ((g(t0 + k * h / 8.0) < 0) != (ref < 0)) return false;
    return true;
  };

  std::vector<int> ok(cand.size(), 0);
  parallel::for_chunks(cand.size(), [&](std::size_t b, std::size_t e, std::size_t) {
    for (std::size_t i = b; i < e; ++i) {
      std::size_t am = 0;
      ok[i] = sampled_ok(cand[i], am) && refined_ok(cand[i], am);
    }
  });
  StarshapedResult res;
  res.points_tested = static_cast<int>(cand.size());
  for (std::size_t i = 0; i < cand.size(); ++i)
    if (ok[i]) {
      res.witness = cand[i];
      break;
    }
  return res;
}

// ---- admissible random directions -----------------------------------------

struct AdmissibilityOptions {
  double min_tangent_angle = 1e-3;  // min_t |T × u|
  double min_crossing_angle = 1e-3;
  double min_height_gap = 1e-6;
  double triple_point_tol = 1e-6;
  double min_zero_slope = 1e-6;
  int max_rejections = 10000;
};

struct AdmissibleDirection {
  Direction direction;
  int rejections = 0;
  std::vector<Crossing> crossings;
};

/// Checks every admissibility condition for a given u.  Returns the crossing
/// list when admissible.
inline std::optional<std::vector<Crossing>> admissible(const SampledCurve& sc, std::shared_ptr<const SampledCurve> shared,
                                                       const NormalField* normal, const Vec3& u,
                                                       const AdmissibilityOptions& opt = {}) {
  for (std::size_t i = 0; i < sc.n; ++i)
    if (sc.d1[i].normalized().cross(u).norm() <= opt.min_tangent_angle) return std::nullopt;
  const PlanarProjection proj(std::move(shared), make_direction(u));
  std::vector<Crossing> cs;
  try {
    CrossingOptions co;
    co.min_angle = opt.min_crossing_angle;
    co.min_height_gap = opt.min_height_gap;
    cs = self_crossings(proj, co);
  } catch (const Error&) {
    return std::nullopt;
  }
  for (std::size_t a = 0; a < cs.size(); ++a)
    for (std::size_t b = a + 1; b < cs.size(); ++b)
      if ((cs[a].point - cs[b].point).norm() < opt.triple_point_tol) return std::nullopt;
  if (normal) {
    try {
      normal_direction_zeros(*normal, u, 4096, opt.min_zero_slope);
    } catch (const Error&) {
      return std::nullopt;
    }
  }
  return cs;
}

inline Vec3 uniform_on_sphere(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  for (;;) {
    Vec3 v(g(rng), g(rng), g(rng));
    if (v.norm() > 1e-12) return v.normalized();
  }
}

class DirectionSampler {
 public:
  DirectionSampler(const ClosedCurve& curve, const NormalField* normal, std::uint64_t seed,
                   AdmissibilityOptions opt = {}, std::size_t samples = 4096)
      : samples_(SampledCurve::make(curve, samples)), normal_(normal), rng_(seed), opt_(opt) {}

  AdmissibleDirection next() {
    AdmissibleDirection out;
    for (int rej = 0; rej <= opt_.max_rejections; ++rej) {
      const Vec3 u = uniform_on_sphere(rng_);
      if (auto cs = admissible(*samples_, samples_, normal_, u, opt_)) {
        out.direction = make_direction(u);
        out.rejections = rej;
        out.crossings = std::move(*cs);
        return out;
      }
    }
    throw Error(ErrorCode::sampling_failure,
                "more than " + std::to_string(opt_.max_rejections) + " directions rejected");
  }
  std::shared_ptr<const SampledCurve> samples() const { return samples_; }

 private:
  std::shared_ptr<const SampledCurve> samples_;
  const NormalField* normal_;
  std::mt19937_64 rng_;
  AdmissibilityOptions opt_;
};

inline AdmissibleDirection random_admissible_direction(const ClosedCurve& curve, const NormalField* normal,
                                                       std::uint64_t seed, const AdmissibilityOptions& opt = {}) {
  DirectionSampler s(curve, normal, seed, opt);
  return s.next();
}

}  // namespace asym
