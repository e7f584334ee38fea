#include "asymptote/builtins.hpp"
#include "asymptote/framing.hpp"
#include "asymptote/invariants.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace asym;

namespace {

oracle::Path path_of(const ClosedCurve& c) {
  return [c](double t) { return c.position(t); };
}

FramedCurve frame_unchecked(const ClosedCurve& c, const NormalField& n) {
  FramingOptions o;
  o.require_asymptotic = false;
  return FramedCurve(c, n, o);
}

ClosedCurve trefoil() { return builtin::by_name("trefoil"); }
ClosedCurve cinquefoil() { return builtin::by_name("cinquefoil"); }

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::io_failure;
}

/// Sign changes of det(Γ', Γ'', Γ''') with derivatives from finite differences.
int fd_torsion_sign_changes(const ClosedCurve& c, std::size_t n) {
  const auto p = path_of(c);
  int changes = 0;
  double prev = 0;
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = kTwoPi * double(i % n) / double(n);
    const double d = oracle::fd(p, t, 1).cross(oracle::fd(p, t, 2)).dot(oracle::fd(p, t, 3, 1e-2));
    if (i > 0 && (d > 0) != (prev > 0)) ++changes;
    prev = d;
  }
  return changes;
}

}  // namespace

// ---- Frenet ----------------------------------------------------------------

TEST(Frenet, CircleAtZero) {
  const auto f = frenet_frame(builtin::circle(), 0.0);
  EXPECT_LT((f.T - Vec3(0, 1, 0)).norm(), 1e-14);
  EXPECT_LT((f.N - Vec3(-1, 0, 0)).norm(), 1e-14);
  EXPECT_LT((f.B - Vec3(0, 0, 1)).norm(), 1e-14);
}

TEST(Frenet, TorusKnotMatchesFiniteDifferences) {
  const auto c = builtin::torus_knot({2, 3, 2.0, 0.5});
  const auto p = path_of(c);
  for (double t : {0.0, 0.7, 2.1, 4.0}) {
    const auto f = frenet_frame(c, t);
    const Vec3 d1 = oracle::fd(p, t, 1), d2 = oracle::fd(p, t, 2);
    const Vec3 T = d1.normalized();
    const Vec3 B = d1.cross(d2).normalized();
    EXPECT_LT((f.T - T).norm(), 1e-6);
    EXPECT_LT((f.B - B).norm(), 1e-6);
    EXPECT_LT((f.N - B.cross(T)).norm(), 1e-6);
    EXPECT_NEAR(f.T.cross(f.N).dot(f.B), 1.0, 1e-12);
  }
}

TEST(Frenet, InflectionPointRejected) {
  // Γ'' = 0 at t = 0 on the lifted lemniscate
  EXPECT_EQ(code_of([] { frenet_frame(builtin::figure_eight(), 0.0); }), ErrorCode::inflection_point);
  EXPECT_EQ(code_of([] { torsion(builtin::figure_eight(), 0.0); }), ErrorCode::inflection_point);
}

TEST(Curvature, CircleOfRadiusTwo) {
  const auto c = builtin::circle(2.0);
  for (double t : {0.0, 1.0, 3.0}) {
    EXPECT_NEAR(curvature(c, t), 0.5, 1e-14);
    EXPECT_NEAR(torsion(c, t), 0.0, 1e-14);
  }
}

TEST(Curvature, KovalevaFrenetOdeResiduals) {
  const auto c = builtin::kovaleva();
  const double tol = inflection_tolerance(c);
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    const double t = kTwoPi * (i + 0.5) / 1000;
    const double k = curvature(c, t), tau = torsion(c, t, tol), speed = c.derivative(t, 1).norm();
    const auto f = frenet_frame(c, t, tol);
    auto deriv = [&](auto pick) -> Vec3 {
      return oracle::fd([&](double s) { return Vec3(pick(frenet_frame(c, s, tol))); }, t, 1, 2e-4) / speed;
    };
    const Vec3 dT = deriv([](const FrenetFrame& x) { return x.T; });
    const Vec3 dN = deriv([](const FrenetFrame& x) { return x.N; });
    const Vec3 dB = deriv([](const FrenetFrame& x) { return x.B; });
    const double scale = std::max(1.0, std::abs(tau) + k);
    worst = std::max({worst, (dT - k * f.N).norm() / scale, (dN + k * f.T - tau * f.B).norm() / scale,
                      (dB + tau * f.N).norm() / scale});
  }
  EXPECT_LT(worst, 1e-5);
}

TEST(Curvature, TorusKnotBoundedAwayFromZero) {
  const auto c = builtin::torus_knot({2, 3, 2.0, 0.5});
  const auto p = path_of(c);
  double lo = 1e300;
  for (int i = 0; i < 20000; ++i) {
    const double t = kTwoPi * i / 20000.0;
    const Vec3 d1 = oracle::fd(p, t, 1), d2 = oracle::fd(p, t, 2);
    lo = std::min(lo, d1.cross(d2).norm() / std::pow(d1.norm(), 3));
  }
  EXPECT_GT(lo, 0.0);
  for (int i = 0; i < 2000; ++i) EXPECT_GT(curvature(c, kTwoPi * i / 2000.0), 0.5 * lo);
}

// ---- asymptotic normal -----------------------------------------------------------

TEST(AsymptoticNormal, TorusKnotIsBinormal) {
  for (const auto& c : {trefoil(), cinquefoil()}) {
    const auto n = asymptotic_normal(c);
    EXPECT_TRUE(n.sign_flips().empty());
    for (int i = 0; i < 1024; ++i) {
      const double t = kTwoPi * i / 1024.0;
      EXPECT_NEAR(n.at(t).dot(frenet_frame(c, t).B), 1.0, 1e-12);
    }
  }
}

TEST(AsymptoticNormal, KovalevaContinuousField) {
  const auto c = builtin::kovaleva();
  const auto n = asymptotic_normal(c);
  const auto p = path_of(c);
  auto min_step = [&](auto&& field, int grid) {
    double worst = 1;
    for (int i = 0; i < grid; ++i)
      worst = std::min(worst, field(kTwoPi * i / double(grid)).dot(field(kTwoPi * (i + 1) / double(grid))));
    return worst;
  };
  auto fd_binormal = [&](double t) -> Vec3 { return oracle::fd(p, t, 1).cross(oracle::fd(p, t, 2)).normalized(); };
  auto field = [&](double t) { return n.at(t); };
  // B turns by up to 0.21 rad between 4096-grid neighbours on this curve
  EXPECT_NEAR(min_step(field, 4096), min_step(fd_binormal, 4096), 1e-6);
  EXPECT_GT(min_step(field, 8192), 0.99);
  for (int i = 0; i < 4096; ++i) EXPECT_GT(std::abs(n.at(kTwoPi * i / 4096.0).dot(fd_binormal(kTwoPi * i / 4096.0))), 1 - 1e-9);
}

TEST(AsymptoticNormal, KovalevaTorsionSignChangesMatchOracle) {
  // τ_g = ±τ for n = ±B, so its sign pattern is that of det(Γ',Γ'',Γ''').
  const auto c = builtin::kovaleva();
  const auto framed = frame_unchecked(c, asymptotic_normal(c));
  EXPECT_EQ(framed.tau_sign_changes(), fd_torsion_sign_changes(c, 1024));
}

TEST(AsymptoticNormal, PlanarCircleIsNotAsymptotic) {
  const auto c = builtin::circle();
  const NormalField n = constant_field(Vec3::UnitZ());
  EXPECT_EQ(code_of([&] { FramedCurve f(c, n); }), ErrorCode::not_asymptotic);
}

TEST(AsymptoticNormal, VanishingCurvatureHasNoFraming) {
  // a segment traversed back and forth: κ ≡ 0 wherever it is regular
  const ClosedCurve seg(
      [](double t, int order) {
        const Series x = Series::variable(t, order);
        return SVec3{cos(x), Series(0.0, order), Series(0.0, order)};
      },
      CurveKind::analytic_builtin, "segment");
  EXPECT_EQ(code_of([&] { asymptotic_normal(seg); }), ErrorCode::no_darboux_framing);
}

TEST(AsymptoticNormal, FigureEightFlipsAtInflections) {
  const auto c = builtin::figure_eight();
  const auto n = asymptotic_normal(c);
  EXPECT_EQ(n.sign_flips().size(), 2u);
  const auto framed = frame_unchecked(c, n);
  const auto inf = inflections(framed);
  ASSERT_EQ(inf.zeros.size(), 2u);
  // dense sign scan of κ_g from finite differences of the frame
  int changes = 0;
  double prev = framed.at(0.0013).kappa_g;
  for (int i = 1; i <= 20000; ++i) {
    const double k = framed.at(0.0013 + kTwoPi * i / 20000.0).kappa_g;
    changes += (k > 0) != (prev > 0);
    prev = k;
  }
  EXPECT_EQ(changes, 2);
}

TEST(AsymptoticNormal, ReversedInitialSign) {
  const auto c = builtin::figure_eight();
  AsymptoticOptions o;
  o.initial_sign = -1;
  const auto a = frame_unchecked(c, asymptotic_normal(c));
  const auto b = frame_unchecked(c, asymptotic_normal(c, o));
  for (int i = 0; i < 200; ++i) {
    const double t = kTwoPi * (i + 0.3) / 200;
    const auto p = a.at(t), q = b.at(t);
    EXPECT_LT((p.n + q.n).norm(), 1e-10);
    EXPECT_NEAR(p.kappa_g, -q.kappa_g, 1e-9);
    EXPECT_NEAR(std::abs(p.tau_g), std::abs(q.tau_g), 1e-9);
    EXPECT_NEAR(std::abs(ruled_patch_curvature(a, t)), std::abs(ruled_patch_curvature(b, t)), 1e-9);
  }
  const auto ia = inflections(a).zeros, ib = inflections(b).zeros;
  ASSERT_EQ(ia.size(), ib.size());
  for (std::size_t k = 0; k < ia.size(); ++k) EXPECT_NEAR(ia[k], ib[k], 1e-9);
}

// ---- Darboux quantities ------------------------------------------------------------

TEST(Darboux, FrameOrthonormalRightHanded) {
  const auto c = trefoil();
  const auto framed = FramedCurve(c, asymptotic_normal(c));
  for (int i = 0; i < 512; ++i) {
    const auto p = framed.at(kTwoPi * i / 512.0);
    EXPECT_NEAR(p.T.dot(p.n), 0, 1e-9);
    EXPECT_NEAR(p.T.dot(p.n_perp), 0, 1e-9);
    EXPECT_NEAR(p.n.dot(p.n_perp), 0, 1e-9);
    EXPECT_NEAR(p.T.norm(), 1, 1e-9);
    EXPECT_NEAR(p.T.cross(p.n_perp).dot(p.n), 1, 1e-9);
  }
}

TEST(Darboux, OdeClosureOnFramedCurves) {
  for (const auto& c : {trefoil(), cinquefoil(), builtin::kovaleva(), builtin::figure_eight()}) {
    const auto framed = frame_unchecked(c, asymptotic_normal(c));
    double worst = 0;
    for (int i = 0; i < 1024; ++i) worst = std::max(worst, framed.at(kTwoPi * i / 1024.0).residual);
    EXPECT_LT(worst, 1e-6) << c.name();
  }
}

TEST(Darboux, OdeAgainstFiniteDifferencesOfFrame) {
  const auto c = trefoil();
  const auto framed = FramedCurve(c, asymptotic_normal(c));
  for (double t : {0.2, 1.9, 3.3, 5.5}) {
    const auto p = framed.at(t);
    const double h = 1e-5, speed = c.derivative(t, 1).norm();
    const auto a = framed.at(t + h), b = framed.at(t - h);
    const Vec3 dT = (a.T - b.T) / (2 * h * speed), dnp = (a.n_perp - b.n_perp) / (2 * h * speed),
               dn = (a.n - b.n) / (2 * h * speed);
    EXPECT_LT((dT - p.kappa_g * p.n_perp).norm(), 1e-6);
    EXPECT_LT((dnp + p.kappa_g * p.T - p.tau_g * p.n).norm(), 1e-6);
    EXPECT_LT((dn + p.tau_g * p.n_perp).norm(), 1e-6);
  }
}

TEST(Darboux, GeodesicCurvatureMatchesCurvature) {
  for (const auto& c : {builtin::kovaleva(), trefoil(), builtin::figure_eight()}) {
    const auto framed = frame_unchecked(c, asymptotic_normal(c));
    for (int i = 0; i < 1000; ++i) {
      const double t = kTwoPi * (i + 0.5) / 1000;
      const double k = curvature(c, t);
      if (k > 1e-6) EXPECT_NEAR(std::abs(framed.at(t).kappa_g), k, 1e-8) << c.name() << " t=" << t;
    }
  }
}

TEST(Darboux, GeodesicTorsionEqualsTorsion) {
  for (const auto& c : {builtin::kovaleva(), trefoil(), cinquefoil()}) {
    const auto framed = frame_unchecked(c, asymptotic_normal(c));
    const double tol = inflection_tolerance(c);
    for (int i = 0; i < 500; ++i) {
      const double t = kTwoPi * (i + 0.5) / 500;
      const auto p = framed.at(t);
      const Vec3 B = frenet_frame(c, t, tol).B;
      EXPECT_NEAR(std::abs(p.n.dot(B)), 1.0, 1e-9);
      // n = s B, n⊥ = n × T = s N, so τ_g = ⟨(sN)', sB⟩ = τ for either s
      EXPECT_NEAR(p.tau_g, torsion(c, t, tol), 1e-6 * std::max(1.0, std::abs(p.tau_g)));
    }
  }
}

TEST(Darboux, CircleWithPlaneNormal) {
  // n = e₃ puts n⊥ = n × T on the inward radius
  const auto c = builtin::circle(2.0);
  const NormalField up = constant_field(Vec3::UnitZ());
  const auto q = geodesic_quantities(c, up, 0.7);
  EXPECT_NEAR(std::abs(q.kappa_g), 0.5, 1e-14);
  EXPECT_NEAR(q.tau_g, 0.0, 1e-14);
  EXPECT_LT((darboux_at(c, up, 0.7).n_perp + c.position(0.7) / 2.0).norm(), 1e-14);
  EXPECT_EQ(code_of([&] { FramedCurve f(c, up); }), ErrorCode::not_asymptotic);
}

TEST(Darboux, NonNormalFieldIsInconsistent) {
  const auto c = trefoil();
  EXPECT_EQ(code_of([&] { geodesic_quantities(c, constant_field(Vec3(0.3, 0.1, 1)), 0.4); }),
            ErrorCode::inconsistent_framing);
}

// ---- inflections -----------------------------------------------------------------------

TEST(Inflections, NoneOnTorusKnot) {
  const auto c = builtin::torus_knot({2, 3, 2.0, 0.5});
  const auto framed = frame_unchecked(c, asymptotic_normal(c));
  EXPECT_TRUE(inflections(framed).zeros.empty());
}

TEST(Inflections, RefinedToHighAccuracy) {
  const auto c = builtin::figure_eight();
  const auto framed = frame_unchecked(c, asymptotic_normal(c));
  const auto z = inflections(framed).zeros;
  ASSERT_EQ(z.size(), 2u);
  // Γ'' = (−sin t, −2 sin 2t, …) vanishes at 0 and π
  EXPECT_NEAR(std::abs(circular_diff(z[0], 0.0)), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(circular_diff(z[1], std::numbers::pi)), 0.0, 1e-10);
}

// ---- ruled strip ---------------------------------------------------------------------------

TEST(RuledPatch, TorusKnotFrenetFraming) {
  for (const auto& c : {trefoil(), cinquefoil()}) {
    const auto framed = FramedCurve(c, asymptotic_normal(c));
    const double tol = inflection_tolerance(c);
    for (int i = 0; i < 1024; ++i) {
      const double t = kTwoPi * i / 1024.0;
      const double tau = torsion(c, t, tol);
      EXPECT_NEAR(ruled_patch_curvature(framed, t), -tau * tau, 1e-6 * std::max(1.0, tau * tau));
    }
  }
}

TEST(RuledPatch, KovalevaIdentityAgainstFiniteDifferenceSurface) {
  const auto c = builtin::kovaleva();
  const auto framed = frame_unchecked(c, asymptotic_normal(c));
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    const double t = kTwoPi * (i + 0.25) / 1000;
    const double tau = framed.at(t).tau_g;
    worst = std::max(worst, std::abs(ruled_patch_curvature(framed, t) + tau * tau));
  }
  EXPECT_LT(worst, 1e-6);
  // Gauss curvature of X(t,s) = Γ + s n⊥ from finite differences at one point
  const double t = 1.234, h = 1e-4;
  auto X = [&](double a, double s) { return Vec3(c.position(a) + s * framed.at(a).n_perp); };
  const Vec3 Xt = (X(t + h, 0) - X(t - h, 0)) / (2 * h), Xs = (X(t, h) - X(t, -h)) / (2 * h);
  const Vec3 Xtt = (X(t + h, 0) - 2 * X(t, 0) + X(t - h, 0)) / (h * h);
  const Vec3 Xts = (X(t + h, h) - X(t + h, -h) - X(t - h, h) + X(t - h, -h)) / (4 * h * h);
  const Vec3 nu = Xt.cross(Xs).normalized();
  const double E = Xt.dot(Xt), F = Xt.dot(Xs), G = Xs.dot(Xs);
  const double K = (Xtt.dot(nu) * 0.0 - std::pow(Xts.dot(nu), 2)) / (E * G - F * F);
  EXPECT_NEAR(ruled_patch_curvature(framed, t), K, 1e-5 * std::max(1.0, std::abs(K)));
}

TEST(RuledPatch, PlanarCircleIsFlat) {
  const auto c = builtin::circle();
  EXPECT_NEAR(ruled_patch_curvature(c, constant_field(Vec3::UnitZ()), 0.5), 0.0, 1e-14);
}

TEST(RuledPatch, NegativeOnValidFramedCurves) {
  for (const auto& c : {trefoil(), cinquefoil()}) {
    const auto framed = FramedCurve(c, asymptotic_normal(c));
    for (int i = 0; i < 1024; ++i) EXPECT_LT(ruled_patch_curvature(framed, kTwoPi * i / 1024.0), 0.0);
  }
}

// ---- spherical image -----------------------------------------------------------------------

TEST(SphericalCurvature, GreatCircleIsGeodesic) {
  const NormalField g(
      [](double t, int order) {
        Series s, co;
        sincos(Series::variable(t, order), s, co);
        return SVec3{co, Series(0.0, order), s};
      },
      NormalProvenance::analytic, "great");
  for (double t : {0.1, 2.0, 4.0}) EXPECT_NEAR(spherical_geodesic_curvature(g, t), 0.0, 1e-14);
}

TEST(SphericalCurvature, LatitudeCircle) {
  for (double phi : {0.2, 0.7, -0.4}) {
    const NormalField lat(
        [phi](double t, int order) {
          Series s, co;
          sincos(Series::variable(t, order), s, co);
          return SVec3{std::cos(phi) * co, std::cos(phi) * s, Series(std::sin(phi), order)};
        },
        NormalProvenance::analytic, "latitude");
    for (double t : {0.3, 3.0}) EXPECT_NEAR(spherical_geodesic_curvature(lat, t), std::tan(phi), 1e-12);
  }
}

TEST(SphericalCurvature, ConstantFieldIsSingular) {
  EXPECT_EQ(code_of([] { spherical_geodesic_curvature(constant_field(Vec3::UnitZ()), 0.0); }),
            ErrorCode::spherical_singularity);
}

TEST(SphericalCurvature, RatioOnTorusKnots) {
  for (const auto& c : {trefoil(), cinquefoil()}) {
    const auto framed = FramedCurve(c, asymptotic_normal(c));
    for (int i = 0; i < 1000; ++i)
      EXPECT_LT(spherical_geodesic_curvature(framed, kTwoPi * i / 1000.0).residual, 1e-7) << c.name();
  }
}

TEST(SphericalImage, KovalevaNotInjective) {
  const auto n = asymptotic_normal(builtin::kovaleva());
  const auto r = spherical_image_injective(n);
  EXPECT_FALSE(r.injective);
  for (const auto& p : r.pairs) EXPECT_LT((n.at(p.s) - n.at(p.t)).norm(), 1e-8);
}

TEST(SphericalImage, LatitudeCircleInjective) {
  const NormalField lat(
      [](double t, int order) {
        Series s, co;
        sincos(Series::variable(t, order), s, co);
        return SVec3{0.8 * co, 0.8 * s, Series(0.6, order)};
      },
      NormalProvenance::analytic, "latitude");
  EXPECT_TRUE(spherical_image_injective(lat).injective);
}

TEST(SphericalImage, DoublyTraversedGreatCircle) {
  const NormalField twice(
      [](double t, int order) {
        Series s, co;
        sincos(2.0 * Series::variable(t, order), s, co);
        return SVec3{co, s, Series(0.0, order)};
      },
      NormalProvenance::analytic, "twice");
  const auto r = spherical_image_injective(twice);
  EXPECT_FALSE(r.injective);
  ASSERT_FALSE(r.pairs.empty());
  for (const auto& p : r.pairs) EXPECT_TRUE(p.degenerate);
}
