#include "asymptote/builtins.hpp"
#include "asymptote/framing.hpp"
#include "asymptote/invariants.hpp"
#include "asymptote/projection.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace asym;

namespace {

oracle::Path path_of(const ClosedCurve& c) {
  return [c](double t) { return c.position(t); };
}

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

Eigen::Matrix3d rot_x(double a) { return Eigen::AngleAxisd(a, Vec3::UnitX()).toRotationMatrix(); }

Eigen::Matrix3d random_rotation(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Eigen::Quaterniond q(g(rng), g(rng), g(rng), g(rng));
  return q.normalized().toRotationMatrix();
}

/// polygon linking number of (Γ, Γ + εv), both sampled at n points
double polygon_pushoff_linking(const ClosedCurve& c, const NormalField& v, double eps, std::size_t n) {
  const auto P = oracle::polygon(path_of(c), n);
  const auto Q = oracle::polygon([&](double t) { return Vec3(c.position(t) + eps * v.at(t)); }, n);
  return oracle::polygon_linking(P, Q);
}

FramedCurve frenet_framed(const ClosedCurve& c) { return FramedCurve(c, asymptotic_normal(c)); }

FramedCurve kovaleva_framed() {
  const auto c = builtin::kovaleva();
  FramingOptions o;
  o.require_asymptotic = false;
  return FramedCurve(c, asymptotic_normal(c), o);
}

}  // namespace

// ---- Gauss linking integral -------------------------------------------------------

TEST(GaussLinking, FarApartCircles) {
  const auto a = builtin::circle();
  const auto b = transformed(builtin::circle(), rot_x(0.3), Vec3(5, 0, 0));
  const auto r = linking_gauss(a, b);
  EXPECT_EQ(r.integer, 0);
  EXPECT_LT(r.residual, 1e-6);
}

TEST(GaussLinking, HopfLinkAgainstPolygonOracles) {
  const auto a = builtin::circle();
  const auto b = transformed(builtin::circle(), rot_x(std::numbers::pi / 2), Vec3(1, 0, 0));
  const double exact = oracle::polygon_linking(oracle::polygon(path_of(a), 400), oracle::polygon(path_of(b), 400));
  const double mid = oracle::midpoint_linking(path_of(a), path_of(b), 400);
  ASSERT_NEAR(std::abs(exact), 1.0, 1e-9);  // segment solid angles are exact for polygons
  EXPECT_NEAR(mid, exact, 1e-3);
  const auto r = linking_gauss(a, b);
  EXPECT_EQ(r.integer, std::lround(exact));
  EXPECT_LT(r.residual, 1e-6);
  EXPECT_EQ(linking_gauss(reversed(a), b).integer, -r.integer);
  EXPECT_EQ(linking_gauss(b, a).integer, r.integer);
}

TEST(GaussLinking, TouchingCurvesAreIllConditioned) {
  const auto a = builtin::circle();
  const auto b = transformed(builtin::circle(), rot_x(std::numbers::pi / 2), Vec3(2, 0, 0));
  EXPECT_EQ(code_of([&] { linking_gauss(a, b); }), ErrorCode::ill_conditioned_linking);
}

TEST(GaussLinking, TorusKnotPairMatchesPolygon) {
  const auto a = builtin::by_name("trefoil");
  const auto b = transformed(builtin::circle(1.5), Eigen::Matrix3d::Identity(), Vec3(0, 0, 0.05));  // torus core
  const double exact = oracle::polygon_linking(oracle::polygon(path_of(a), 1024), oracle::polygon(path_of(b), 256));
  EXPECT_EQ(linking_gauss(a, b).integer, std::lround(exact));
  EXPECT_NE(std::lround(exact), 0);
}

// ---- linking of a framing -----------------------------------------------------------

TEST(FramingLinking, CircleWithAxisNormal) {
  const auto c = builtin::circle();
  const auto v = constant_field(Vec3::UnitZ());
  EXPECT_EQ(linking_gauss_framing(c, v).integer, 0);
  const auto f = linking_of_framing(c, v, 1);
  EXPECT_EQ(f.via_crossings, 0);
  EXPECT_EQ(f.via_gauss, 0);
}

TEST(FramingLinking, KovalevaAgainstPolygonOracle) {
  const auto c = builtin::kovaleva();
  const auto n = asymptotic_normal(c);
  const double eps = 0.05;
  const double exact = polygon_pushoff_linking(c, n, eps, 4096);
  const auto g = linking_gauss_framing(c, n, eps);
  EXPECT_NEAR(g.value, exact, 0.01);
  EXPECT_EQ(g.integer, std::lround(exact));
  // default push-off distance gives the same integer
  EXPECT_EQ(linking_gauss_framing(c, n).integer, g.integer);
  const auto f = linking_of_framing(c, n, 3);
  EXPECT_EQ(f.via_crossings, g.integer);
  // the printed curve's asymptotic framing links once (not zero); see notes
  EXPECT_EQ(g.integer, -1);
}

TEST(FramingLinking, TrefoilFrenetAgainstPolygonOracle) {
  const auto c = builtin::by_name("trefoil");
  const auto n = asymptotic_normal(c);
  const double eps = 0.02;
  const double exact = polygon_pushoff_linking(c, n, eps, 4096);
  const auto g = linking_gauss_framing(c, n, eps);
  EXPECT_EQ(g.integer, std::lround(exact));
  EXPECT_LT(std::abs(exact - std::lround(exact)), 0.01);
  for (std::uint64_t seed : {1, 2, 3}) EXPECT_EQ(linking_of_framing(c, n, seed).via_crossings, g.integer);
}

// ---- writhe --------------------------------------------------------------------------

TEST(Writhe, PlanarCurvesVanish) {
  EXPECT_LT(std::abs(writhe_gauss(builtin::circle()).value), 1e-6);
  Eigen::Matrix3d squash = Eigen::Matrix3d::Identity();
  squash(1, 1) = 0.3;
  const auto ellipse = transformed(builtin::circle(2.0), squash * random_rotation(5), Vec3(0.1, 0.2, 0.3));
  EXPECT_LT(std::abs(writhe_gauss(ellipse).value), 1e-6);
}

TEST(Writhe, AgreesWithPolygonWrithe) {
  for (const auto& c : {builtin::by_name("trefoil"), builtin::random_fourier(8)}) {
    const double w = writhe_gauss(c).value;
    const double p1 = oracle::polygon_writhe(oracle::polygon(path_of(c), 1024));
    const double p2 = oracle::polygon_writhe(oracle::polygon(path_of(c), 2048));
    const double ref = (4 * p2 - p1) / 3;  // polygon error is O(h²)
    EXPECT_NEAR(w, ref, 1e-3) << c.name();
  }
}

TEST(Writhe, MonteCarloAverageOfCrossingNumbers) {
  const auto circ = writhe_average(builtin::circle(), 100, 1);
  EXPECT_EQ(circ.mean, 0.0);
  EXPECT_EQ(circ.stderr_, 0.0);
  const auto c = builtin::kovaleva();
  const auto m = writhe_average(c, 2000, 11);
  const double w = writhe_gauss(c).value;
  EXPECT_LT(std::abs(m.mean - w), 3 * m.stderr_) << m.mean << " vs " << w;
  EXPECT_EQ(code_of([&] { writhe_average(c, 50, 1); }), ErrorCode::invalid_spec);
}

TEST(Writhe, CalugareanuOnKovaleva) {
  const auto c = builtin::kovaleva();
  const auto n = asymptotic_normal(c);
  const double lk = double(linking_gauss_framing(c, n).integer);
  const double wr = writhe_gauss(c).value;
  const double tw = twist_direct(c, n);
  EXPECT_LT(std::abs(lk - wr - tw), 1e-3);
}

// ---- twist and rotation ----------------------------------------------------------------

TEST(Twist, CircleConstantAndSpinning) {
  const auto c = builtin::circle();
  const auto ez = constant_field(Vec3::UnitZ());
  EXPECT_LT(std::abs(twist_direct(c, ez)), 1e-10);
  for (int m : {-2, 1, 3}) {
    const auto v = rotated_field(c, ez, m);
    EXPECT_NEAR(twist_direct(c, v), double(m), 1e-8);
    EXPECT_EQ(rotation_of_field(c, v, ez), m);
    const auto t = twist(c, v, ez);
    EXPECT_LT(t.residual, 1e-8);
  }
}

TEST(Twist, KovalevaDarbouxRouteMatchesDirect) {
  const auto c = builtin::kovaleva();
  const auto n = asymptotic_normal(c);
  const auto t = twist(c, n, n);
  EXPECT_EQ(t.rot, 0);
  EXPECT_LT(t.residual, 1e-8);
  // the direct integrand from finite differences of the field
  auto integrand = [&](double s) {
    const auto wf = [&](double x) { return Vec3(n.at(x).cross(oracle::fd(path_of(c), x, 1).normalized())); };
    return oracle::fd(wf, s, 1).dot(n.at(s));
  };
  EXPECT_NEAR(oracle::riemann(integrand, 4000) / kTwoPi, t.direct, 1e-5);
}

TEST(Twist, InvalidFieldRejected) {
  const auto c = builtin::circle();
  EXPECT_EQ(code_of([&] { twist_direct(c, constant_field(Vec3::UnitX())); }), ErrorCode::invalid_framing);
}

TEST(RotationOfField, ZeroForSameFieldAndMForRotated) {
  const auto c = builtin::by_name("trefoil");
  const auto n = asymptotic_normal(c);
  EXPECT_EQ(rotation_of_field(c, n, n), 0);
  for (int m : {-3, 2, 5}) EXPECT_EQ(rotation_of_field(c, rotated_field(c, n, m), n), m);
}

// ---- the crossing formula -----------------------------------------------------------------

TEST(Theorem1, KovalevaIsNotAsymptotic) {
  const auto f = kovaleva_framed();
  EXPECT_FALSE(f.asymptotic());
  EXPECT_EQ(code_of([&] { theorem1_both_sides(f, Vec3::UnitZ()); }), ErrorCode::not_asymptotic);
}

TEST(Theorem1, TorusKnotAxisAgainstPolygonOracle) {
  for (const char* name : {"trefoil", "cinquefoil"}) {
    const auto c = builtin::by_name(name);
    const auto f = frenet_framed(c);
    ASSERT_TRUE(f.asymptotic());
    const double eps = 0.02;
    const long oracle_lk = std::lround(polygon_pushoff_linking(c, f.normal(), eps, 4096));
    const auto s = theorem1_both_sides(f, Vec3(0.01, 0.02, 1).normalized());
    EXPECT_EQ(s.lhs, oracle_lk) << name;
    EXPECT_EQ(s.rhs, s.lhs) << name;
  }
}

TEST(Theorem1, DirectionIndependent) {
  for (const auto& c : {builtin::by_name("trefoil"), builtin::triple_winding()}) {
    const auto f = frenet_framed(c);
    const long lhs = linking_gauss_framing(c, f.normal()).integer;
    DirectionSampler s(c, &f.normal(), 101);
    for (int k = 0; k < 15; ++k) {
      const auto u = s.next().direction.u;
      EXPECT_EQ(theorem1_both_sides(f, u, lhs, s.samples()).rhs, lhs) << c.name();
    }
  }
}

TEST(Theorem1, NegatedCrossingSignIsCaught) {
  // mutation: flipping every crossing sign must surface as a violation
  const auto c = builtin::by_name("trefoil");
  const auto f = frenet_framed(c);
  CrossingOptions bad;
  bad.negate_sign = true;
  const Vec3 u = random_admissible_direction(c, &f.normal(), 2).direction.u;
  ASSERT_NE(crossing_number(project(c, u)), 0);
  EXPECT_EQ(code_of([&] { theorem1_both_sides(f, u, std::nullopt, nullptr, bad); }), ErrorCode::theorem_violation);
}

TEST(Theorem1, LocalSignFormOnKovaleva) {
  const auto f = kovaleva_framed();
  const long lhs = linking_gauss_framing(f.curve(), f.normal()).integer;
  DirectionSampler s(f.curve(), &f.normal(), 7);
  for (int k = 0; k < 10; ++k) {
    const auto d = s.next();
    EXPECT_EQ(local_sign_rhs(f, d.direction.u, crossing_number(d.crossings)), lhs);
  }
  EXPECT_EQ(local_sign_rhs(f, Vec3::UnitZ(), crossing_number(project(f.curve(), Vec3::UnitZ()))), lhs);
}

// ---- self-linking and projections -------------------------------------------------------------

TEST(SelfLinking, TorusKnotThreeRoutes) {
  const auto c = builtin::torus_knot(builtin::trefoil_params());
  const auto sl = self_linking(c, 5);
  EXPECT_EQ(sl.via_projection, sl.via_gauss);
  EXPECT_NEAR(sl.via_writhe, sl.via_projection, 1e-3);
  const long oracle_sl = std::lround(polygon_pushoff_linking(c, principal_normal_field(c), 0.02, 4096));
  EXPECT_EQ(sl.value, oracle_sl);
}

TEST(SelfLinking, PreconditionFailures) {
  EXPECT_EQ(code_of([] { self_linking(builtin::circle()); }), ErrorCode::no_self_linking);
  EXPECT_EQ(code_of([] { self_linking(builtin::kovaleva()); }), ErrorCode::no_self_linking);
  EXPECT_EQ(code_of([] { self_linking(builtin::figure_eight()); }), ErrorCode::no_self_linking);
}

TEST(Banchoff, TorusKnotsOverAdmissibleDirections) {
  const auto c = builtin::by_name("trefoil");
  const int sl = self_linking(c).value;
  DirectionSampler s(c, nullptr, 21);
  for (int k = 0; k < 20; ++k) {
    const auto b = banchoff_check(c, s.next().direction.u, sl, s.samples());
    EXPECT_EQ(b.residual, 0);
    EXPECT_TRUE(b.inflections_match_zeros);
  }
  const auto c5 = builtin::by_name("cinquefoil");
  const int sl5 = self_linking(c5).value;
  EXPECT_EQ(banchoff_check(c5, random_admissible_direction(c5, nullptr, 3).direction.u, sl5).residual, 0);
  EXPECT_EQ(code_of([] { banchoff_check(builtin::figure_eight(), Vec3::UnitZ(), 0); }), ErrorCode::no_self_linking);
}

TEST(Crofton, TorusKnotAverageZeroCount) {
  const auto c = builtin::by_name("trefoil");
  const auto r = crofton_milnor_check(c, 2000, 9);
  // Length(B) from a dense polygon of finite-difference binormals
  const int N = 20000;
  double len = 0;
  Vec3 prev;
  for (int i = 0; i <= N; ++i) {
    const double t = kTwoPi * (i % N) / N;
    const Vec3 B = oracle::fd(path_of(c), t, 1).cross(oracle::fd(path_of(c), t, 2)).normalized();
    if (i > 0) len += (B - prev).norm();
    prev = B;
  }
  EXPECT_NEAR(r.length_B, len, 1e-4 * len);
  EXPECT_LT(r.relative_gap, 0.05);
  EXPECT_LT(r.torsion_residual, 1e-6 * std::max(1.0, r.length_B));
}

// ---- spherical image, height identity, frame change --------------------------------------------

TEST(Spherical, KovalevaKappaKappaAndSkippedAreaChecks) {
  const auto s = spherical_checks(kovaleva_framed());
  EXPECT_LT(s.kappa_kappa_residual, 1e-6);
  EXPECT_FALSE(s.injective);
  EXPECT_FALSE(s.area_checks_run);
  EXPECT_FALSE(s.area_skip_reason.empty());
  EXPECT_TRUE(s.fenchel);
}

TEST(Spherical, FenchelOnAssortedCurves) {
  for (const auto& c : {builtin::by_name("trefoil"), builtin::by_name("cinquefoil"), builtin::triple_winding()}) {
    const auto s = spherical_checks(frenet_framed(c), 200);
    EXPECT_TRUE(s.fenchel) << c.name();
    EXPECT_GE(s.int_kappa, kTwoPi);
    EXPECT_LT(s.kappa_kappa_residual, 1e-6) << c.name();
  }
}

TEST(HeightIdentity, NoZeroDirection) {
  const auto f = frenet_framed(builtin::triple_winding());
  ASSERT_EQ(normal_direction_zeros(f.normal(), Vec3::UnitZ()).count, 0);
  const auto r = petrunin_identity_check(f, Vec3::UnitZ());
  EXPECT_LT(r.residual, 1e-6);
  EXPECT_GT(r.residual_negated, 0.1);
}

TEST(HeightIdentity, DirectionsWithZerosAreInapplicable) {
  // the printed Kovaleva curve has two zeros of ⟨e₃,n⟩
  const auto k = kovaleva_framed();
  EXPECT_EQ(code_of([&] { petrunin_identity_check(k, Vec3::UnitZ()); }), ErrorCode::inapplicable_direction);
  const auto f = frenet_framed(builtin::by_name("trefoil"));
  EXPECT_EQ(code_of([&] { petrunin_identity_check(f, Vec3::UnitX()); }), ErrorCode::inapplicable_direction);
}

TEST(Link2, FrameChangeShiftsByM) {
  const auto k = kovaleva_framed();
  const long lk = linking_gauss_framing(k.curve(), k.normal()).integer;
  EXPECT_EQ(link2_check(k, 0, lk).residual, 0);
  const auto r1 = link2_check(k, 1, lk);
  EXPECT_EQ(r1.residual, 0);
  EXPECT_EQ(r1.lk_v, lk + 1);
  const auto f = frenet_framed(builtin::by_name("trefoil"));
  EXPECT_EQ(link2_check(f, -2).residual, 0);
}

// ---- properties ----------------------------------------------------------------------------

TEST(Properties, CalugareanuOverCurvesAndFrames) {
  for (const auto& c : {builtin::by_name("trefoil"), builtin::random_fourier(19), builtin::triple_winding()}) {
    const auto n = asymptotic_normal(c);
    const double wr = writhe_gauss(c).value;
    for (int m : {0, 1, -2}) {
      const auto v = rotated_field(c, n, m);
      const double lk = double(linking_gauss_framing(c, v).integer);
      const double tw = twist_direct(c, v);
      EXPECT_LT(std::abs(lk - wr - tw), 1e-3) << c.name() << " m=" << m;
    }
  }
}

TEST(Properties, FrameChangeShiftsTwistByM) {
  const auto c = builtin::random_fourier(13);
  const auto n = asymptotic_normal(c);
  const double t0 = twist_direct(c, n);
  for (int m : {-1, 2}) EXPECT_NEAR(twist_direct(c, rotated_field(c, n, m)) - t0, double(m), 1e-8);
}

TEST(Properties, RigidMotionInvariance) {
  const auto c = builtin::random_fourier(14);
  const auto g = transformed(c, random_rotation(99), Vec3(3, -1, 2));
  const auto n = asymptotic_normal(c), ng = asymptotic_normal(g);
  EXPECT_EQ(linking_gauss_framing(c, n).integer, linking_gauss_framing(g, ng).integer);
  EXPECT_NEAR(writhe_gauss(c).value, writhe_gauss(g).value, 1e-6);
  EXPECT_NEAR(twist_direct(c, n), twist_direct(g, ng), 1e-6);
  const auto t = builtin::by_name("trefoil");
  const auto tg = transformed(t, random_rotation(7), Vec3(0.5, 0.5, 0.5));
  EXPECT_EQ(self_linking(t).value, self_linking(tg).value);
}

TEST(Properties, ReversalInvariance) {
  for (const auto& c : {builtin::kovaleva(), builtin::random_fourier(15)}) {
    const auto r = reversed(c);
    EXPECT_EQ(linking_gauss_framing(c, asymptotic_normal(c)).integer,
              linking_gauss_framing(r, asymptotic_normal(r)).integer);
    EXPECT_NEAR(writhe_gauss(c).value, writhe_gauss(r).value, 1e-6);
  }
}

TEST(Properties, ScaleInvariance) {
  const auto c = builtin::by_name("trefoil");
  for (double lambda : {0.1, 7.0}) {
    const auto s = scaled(c, lambda);
    const auto n = asymptotic_normal(c), ns = asymptotic_normal(s);
    EXPECT_EQ(linking_gauss_framing(c, n).integer, linking_gauss_framing(s, ns).integer);
    EXPECT_NEAR(writhe_gauss(c).value, writhe_gauss(s).value, 1e-6);
    EXPECT_NEAR(twist_direct(c, n), twist_direct(s, ns), 1e-6);
    EXPECT_EQ(self_linking(c).value, self_linking(s).value);
  }
}
