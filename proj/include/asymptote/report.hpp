#pragma once

// The full identity suite on one framed curve, collected into an
// InvariantReport.  Every check ends up pass / fail / inapplicable / error;
// only "fail" and "error" count against the exit status.

#include "asymptote/construction.hpp"
#include "asymptote/framing.hpp"
#include "asymptote/invariants.hpp"
#include "asymptote/io.hpp"
#include "asymptote/projection.hpp"

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace asym {

struct Tolerances {
  double residual = 1e-6;       // Darboux ODE, ruled K, κ-κ, height identity, torsion identity
  double ratio = 1e-7;          // κ̃_g vs κ_g/|τ_g| pointwise
  double calugareanu = 1e-3;
  double twist_routes = 1e-8;
  double crofton = 0.05;        // relative
  double writhe_sigmas = 3.0;
};

struct AnalyzeConfig {
  std::optional<Vec3> direction;
  std::uint64_t seed = 1;
  int theorem_dirs = 50;
  int writhe_dirs = 2000;
  int crofton_dirs = 2000;
  int banchoff_dirs = 20;
  std::size_t samples = 4096;
  std::vector<int> m_values{-2, -1, 0, 1, 2};
  Vec3 petrunin_direction = Vec3::UnitZ();
  CrossingOptions crossing;  // tests flip negate_sign to inject a convention bug
  Tolerances tol;
};

enum class CheckStatus { pass, fail, inapplicable, error };

inline const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::inapplicable: return "inapplicable";
    case CheckStatus::error: return "error";
  }
  return "?";
}

struct Check {
  std::string name;
  CheckStatus status = CheckStatus::pass;
  double value = 0.0;      // residual or measured quantity
  double tolerance = 0.0;
  std::string detail;
};

struct DirectionRow {
  Vec3 u = Vec3::UnitZ();
  int crossing_number = 0;
  int zeros = 0;
  std::optional<long> rhs;
  std::optional<long> local_rhs;
};

struct InvariantReport {
  std::string curve;
  Json curve_params = Json::object();
  Json framing = Json::object();
  std::optional<LinkingResult> lk_gauss;
  std::optional<int> lk_crossings;
  std::vector<DirectionRow> cr_by_direction;
  std::optional<WritheResult> writhe_gauss;
  std::optional<MeanEstimate> writhe_mc;
  std::optional<TwistResult> twist;
  std::optional<int> rotation_index;  // of the primary projection
  std::optional<int> sl;
  Json quantities = Json::object();  // integrals and other reported numbers
  std::vector<Check> checks;

  std::vector<std::string> failures() const {
    std::vector<std::string> out;
    for (const Check& c : checks)
      if (c.status == CheckStatus::fail || c.status == CheckStatus::error) out.push_back(c.name);
    return out;
  }
  const Check* find(const std::string& name) const {
    for (const Check& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

inline Json vec_json(const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }

inline Json to_json(const InvariantReport& r) {
  Json j;
  j["curve"] = r.curve;
  j["params"] = r.curve_params;
  j["framing"] = r.framing;
  if (r.lk_gauss)
    j["lk_gauss"] = {{"value", r.lk_gauss->value},
                     {"integer", r.lk_gauss->integer},
                     {"residual", r.lk_gauss->residual},
                     {"grid", r.lk_gauss->grid}};
  else
    j["lk_gauss"] = nullptr;
  j["lk_crossings"] = r.lk_crossings ? Json(*r.lk_crossings) : Json(nullptr);
  Json rows = Json::array();
  for (const DirectionRow& d : r.cr_by_direction)
    rows.push_back({{"u", vec_json(d.u)},
                    {"cr", d.crossing_number},
                    {"zeros", d.zeros},
                    {"theorem1_rhs", d.rhs ? Json(*d.rhs) : Json(nullptr)},
                    {"local_sign_rhs", d.local_rhs ? Json(*d.local_rhs) : Json(nullptr)}});
  j["cr_by_direction"] = std::move(rows);
  j["writhe_gauss"] = r.writhe_gauss ? Json(r.writhe_gauss->value) : Json(nullptr);
  if (r.writhe_mc)
    j["writhe_mc"] = {{"mean", r.writhe_mc->mean}, {"stderr", r.writhe_mc->stderr_}, {"samples", r.writhe_mc->samples}};
  else
    j["writhe_mc"] = nullptr;
  if (r.twist)
    j["twist"] = {{"direct", r.twist->direct}, {"via_darboux", r.twist->via_darboux}, {"rot", r.twist->rot}};
  else
    j["twist"] = nullptr;
  j["rotation_index"] = r.rotation_index ? Json(*r.rotation_index) : Json(nullptr);
  j["sl"] = r.sl ? Json(*r.sl) : Json(nullptr);
  j["quantities"] = r.quantities;
  Json checks = Json::object();
  for (const Check& c : r.checks)
    checks[c.name] = {{"status", to_string(c.status)}, {"value", c.value}, {"tolerance", c.tolerance}, {"detail", c.detail}};
  j["checks"] = std::move(checks);
  j["failures"] = r.failures();
  return j;
}

/// One row per check, for the CSV residual table.
inline std::string checks_csv(const InvariantReport& r) {
  Csv c({"check", "status", "value", "tolerance"});
  for (const Check& k : r.checks) c.row(k.name, to_string(k.status), k.value, k.tolerance);
  return c.str();
}

namespace detail {

/// Runs body; an Error becomes an "error" check, or "inapplicable" when its
/// code marks a failed precondition.
inline void guarded(InvariantReport& r, const std::string& name, const std::function<void()>& body,
                    std::initializer_list<ErrorCode> inapplicable = {}) {
  try {
    body();
  } catch (const Error& e) {
    Check c;
    c.name = name;
    c.status = CheckStatus::error;
    for (ErrorCode code : inapplicable)
      if (e.code() == code) c.status = CheckStatus::inapplicable;
    c.detail = e.what();
    r.checks.push_back(std::move(c));
  }
}

inline Check bound_check(std::string name, double value, double tol, std::string detail = {}) {
  Check c{std::move(name), value < tol ? CheckStatus::pass : CheckStatus::fail, value, tol, std::move(detail)};
  if (!std::isfinite(value)) c.status = CheckStatus::fail;
  return c;
}

inline Check flag_check(std::string name, bool ok, std::string detail = {}) {
  return {std::move(name), ok ? CheckStatus::pass : CheckStatus::fail, ok ? 1.0 : 0.0, 1.0, std::move(detail)};
}

}  // namespace detail

/// Full suite for a curve with a given normal field (asymptotic normal when
/// none is supplied).
inline InvariantReport analyze(const ClosedCurve& curve, std::optional<NormalField> normal_in,
                               const AnalyzeConfig& cfg = {}) {
  InvariantReport r;
  r.curve = curve.name();
  for (const auto& [k, v] : curve.params()) r.curve_params[k] = v;
  const auto samples = SampledCurve::make(curve, cfg.samples);

  // ---- framing
  std::optional<FramedCurve> framed;
  detail::guarded(r, "framing", [&] {
    NormalField n = normal_in ? *normal_in : asymptotic_normal(curve);
    FramingOptions fo;
    fo.require_asymptotic = false;
    fo.residual_tol = cfg.tol.residual;
    framed.emplace(curve, n, fo);
    r.framing = {{"normal", n.label()},
                 {"provenance", n.provenance() == NormalProvenance::analytic ? "analytic" : "asymptotic-from-curve"},
                 {"sign_flips", n.sign_flips().size()},
                 {"asymptotic", framed->asymptotic()},
                 {"tau_sign", framed->tau_sign()},
                 {"tau_sign_changes", framed->tau_sign_changes()},
                 {"min_abs_tau_g", framed->min_abs_tau()}};
    r.checks.push_back(detail::bound_check("darboux_ode", framed->max_residual(), cfg.tol.residual));
  });
  if (!framed) return r;
  const ClosedCurve& c = framed->curve();
  const NormalField& n = framed->normal();

  // ---- primary direction and the crossings route
  Vec3 u0 = cfg.direction ? cfg.direction->normalized() : Vec3::Zero();
  detail::guarded(r, "direction", [&] {
    if (!cfg.direction) u0 = random_admissible_direction(c, &n, cfg.seed).direction.u;
  });
  if (u0.norm() == 0.0) return r;

  detail::guarded(r, "lk_gauss", [&] { r.lk_gauss = linking_gauss_framing(c, n); });

  detail::guarded(
      r, "theorem1",
      [&] {
        std::vector<Vec3> dirs{u0};
        DirectionSampler sampler(c, &n, cfg.seed + 1000);
        for (int k = 0; k < cfg.theorem_dirs; ++k) dirs.push_back(sampler.next().direction.u);
        std::set<long> rhs_values, local_values;
        for (const Vec3& u : dirs) {
          DirectionRow row;
          row.u = u;
          row.crossing_number = crossing_number(self_crossings(project(samples, u), cfg.crossing));
          row.zeros = normal_direction_zeros(n, u).count;
          if (framed->asymptotic()) {
            row.rhs = row.crossing_number + (row.zeros / 2) * framed->tau_sign();
            rhs_values.insert(*row.rhs);
          }
          row.local_rhs = local_sign_rhs(*framed, u, row.crossing_number);
          local_values.insert(*row.local_rhs);
          r.cr_by_direction.push_back(row);
        }
        if (r.lk_gauss) {
          const bool ok = local_values.size() == 1 && *local_values.begin() == r.lk_gauss->integer;
          r.checks.push_back({"theorem1_local_sign", ok ? CheckStatus::pass : CheckStatus::fail,
                              double(local_values.size()), 1.0, "Cr + ½ Σ sign τ_g at zeros of <u,n>"});
        }
        if (!framed->asymptotic())
          throw Error(ErrorCode::not_asymptotic, "geodesic torsion changes sign; right-hand side undefined");
        if (!r.lk_gauss) throw Error(ErrorCode::quadrature_failure, "no Gauss linking value");
        const bool ok = rhs_values.size() == 1 && *rhs_values.begin() == r.lk_gauss->integer;
        std::string d = "lhs " + std::to_string(r.lk_gauss->integer) + ", rhs values {";
        for (long v : rhs_values) d += " " + std::to_string(v);
        d += " } over " + std::to_string(dirs.size()) + " directions";
        r.checks.push_back({"theorem1", ok ? CheckStatus::pass : CheckStatus::fail, double(rhs_values.size()), 1.0, d});
      },
      {ErrorCode::not_asymptotic});

  detail::guarded(r, "link1", [&] {
    const FramingLinking fl = linking_of_framing(c, n, cfg.seed, std::nullopt, r.lk_gauss);
    r.lk_crossings = fl.via_crossings;
    r.checks.push_back(detail::flag_check("link1", true, "Cr + Cr_local/2 = " + std::to_string(fl.via_crossings)));
  });

  // ---- writhe, twist, Călugăreanu, frame change
  detail::guarded(r, "writhe_gauss", [&] { r.writhe_gauss = writhe_gauss(c); });
  if (cfg.writhe_dirs > 0)
    detail::guarded(r, "writhe_mc", [&] {
      r.writhe_mc = writhe_average(c, cfg.writhe_dirs, cfg.seed + 2000);
      if (!r.writhe_gauss) return;
      const double diff = std::abs(r.writhe_mc->mean - r.writhe_gauss->value);
      const double bound = std::max(cfg.tol.writhe_sigmas * r.writhe_mc->stderr_, 1e-3);
      r.checks.push_back(detail::bound_check("writhe_mc", diff, bound, "|MC − Gauss| against 3 standard errors"));
    });
  detail::guarded(r, "twist", [&] {
    r.twist = twist(c, n, n);
    r.checks.push_back(detail::bound_check("twist_routes", r.twist->residual, cfg.tol.twist_routes));
  });

  detail::guarded(r, "calugareanu", [&] {
    if (!r.writhe_gauss || !r.lk_gauss) throw Error(ErrorCode::quadrature_failure, "writhe or linking unavailable");
    double worst = 0.0, worst_link2 = 0.0;
    Json per_m = Json::array();
    for (int m : cfg.m_values) {
      const NormalField v = m == 0 ? n : rotated_field(c, n, m);
      const LinkingResult lk = m == 0 ? *r.lk_gauss : linking_gauss_framing(c, v);
      const double tw = twist_direct(c, v);
      const double res = std::abs(lk.value - r.writhe_gauss->value - tw);
      worst = std::max(worst, res);
      std::optional<int> via_crossings;
      if (m != 0) {
        via_crossings = linking_of_framing(c, v, cfg.seed, std::nullopt, lk).via_crossings;
        worst_link2 = std::max(worst_link2, std::abs(double(lk.integer - r.lk_gauss->integer - m)));
      }
      per_m.push_back({{"m", m}, {"lk", lk.integer}, {"lk_value", lk.value}, {"twist", tw}, {"calugareanu_residual", res},
                       {"lk_crossings", via_crossings ? Json(*via_crossings) : Json(nullptr)}});
    }
    r.quantities["frame_change"] = std::move(per_m);
    r.checks.push_back(detail::bound_check("calugareanu", worst, cfg.tol.calugareanu));
    Check l2{"link2", worst_link2 == 0.0 ? CheckStatus::pass : CheckStatus::fail, worst_link2, 0.5,
             "max |Lk(v_m) − Lk(n) − m|"};
    r.checks.push_back(l2);
  });

  // ---- pointwise identities
  detail::guarded(
      r, "ruled_K",
      [&] {
        double worst = 0.0;
        const std::size_t grid = 1024;
        for (std::size_t i = 0; i < grid; ++i) {
          const double t = kTwoPi * double(i) / double(grid);
          const double tau = framed->at(t).tau_g;
          worst = std::max(worst, std::abs(ruled_patch_curvature(*framed, t) + tau * tau));
        }
        r.checks.push_back(detail::bound_check("ruled_K", worst, cfg.tol.residual, "max |K(t,0) + τ_g²|"));
      },
      {ErrorCode::degenerate_patch});

  detail::guarded(
      r, "spherical",
      [&] {
        const SphericalChecks s = spherical_checks(*framed);
        r.quantities["spherical"] = {{"int_kappa_tilde", s.int_kappa_tilde}, {"int_kappa_g", s.int_kappa_g},
                                     {"int_tau_g", s.int_tau_g},             {"int_kappa", s.int_kappa},
                                     {"length_n", s.length_n},               {"injective", s.injective},
                                     {"max_ratio_residual_abs", s.max_ratio_residual_abs},
                                     {"area", s.area_checks_run ? Json(s.area) : Json(nullptr)},
                                     {"area_skip_reason", s.area_skip_reason}};
        r.checks.push_back(detail::bound_check("geodesic_curvature_ratio", s.max_ratio_residual, cfg.tol.ratio,
                                               "max |κ̃_g − κ_g/|τ_g|| / max(1, |κ_g/τ_g|)"));
        r.checks.push_back(detail::bound_check("kappa_kappa", s.kappa_kappa_residual, cfg.tol.residual,
                                               "|∫κ̃_g dσ − ∫κ_g ds|"));
        if (s.tau_sign != 0)
          r.quantities["spherical"]["kappa_kappa_signed_residual"] =
              std::abs(s.int_kappa_tilde - s.tau_sign * s.int_kappa_g);
        r.checks.push_back(detail::flag_check("fenchel", s.fenchel));
        if (s.area_checks_run) {
          r.checks.push_back(detail::flag_check("gauss_bonnet_bound", s.gauss_bonnet_bound));
          r.checks.push_back(detail::flag_check("kappa_tau", s.kappa_tau));
          r.checks.push_back(detail::flag_check("area_range", s.area_in_range));
          r.checks.push_back(detail::flag_check("isoperimetric", s.isoperimetric));
        } else {
          r.checks.push_back({"gauss_bonnet_bound", CheckStatus::inapplicable, 0.0, 0.0, s.area_skip_reason});
          r.checks.push_back({"kappa_tau", CheckStatus::inapplicable, 0.0, 0.0, s.area_skip_reason});
          r.checks.push_back({"area_range", CheckStatus::inapplicable, 0.0, 0.0, s.area_skip_reason});
          r.checks.push_back({"isoperimetric", CheckStatus::inapplicable, 0.0, 0.0, s.area_skip_reason});
        }
      },
      {ErrorCode::spherical_singularity});

  detail::guarded(
      r, "petrunin",
      [&] {
        const PetruninCheck p = petrunin_identity_check(*framed, cfg.petrunin_direction);
        r.quantities["petrunin_negated_residual"] = p.residual_negated;
        r.checks.push_back(detail::bound_check("petrunin", p.residual, cfg.tol.residual,
                                               "h'<u,n>^2 = tau_g <Gamma, T x u> |Gamma'|"));
      },
      {ErrorCode::inapplicable_direction});

  // ---- primary projection: rotation index and tangent-line cover
  detail::guarded(r, "projection", [&] {
    const PlanarProjection proj = project(samples, u0);
    r.rotation_index = rotation_index(proj);
    const int cr = crossing_number(proj);
    const int pinfl = planar_inflections(proj).count;
    const StarshapedResult star = locally_starshaped(proj);
    r.quantities["primary_projection"] = {{"u", vec_json(u0)},
                                          {"cr", cr},
                                          {"planar_inflections", pinfl},
                                          {"rotation_index", *r.rotation_index},
                                          {"locally_starshaped", star.witness.has_value()}};
    if (framed->asymptotic() && r.lk_gauss && cr == r.lk_gauss->integer)
      r.checks.push_back(detail::flag_check("theorem2", !star.witness.has_value(), "Cr = Lk, so no uncovered point expected"));
    if (pinfl == 0 && framed->asymptotic())
      r.checks.push_back(detail::flag_check("theorem3", std::abs(*r.rotation_index) >= 3,
                                            "inflection-free projection, |rotation index| >= 3 expected"));
  });

  // ---- Frenet self-linking
  detail::guarded(
      r, "self_linking",
      [&] {
        const SelfLinking sl = self_linking(c, cfg.seed);
        r.sl = sl.value;
        r.quantities["self_linking"] = {{"projection", sl.via_projection},
                                        {"gauss", sl.via_gauss},
                                        {"writhe_plus_torsion", sl.via_writhe}};
        r.checks.push_back(detail::flag_check("self_linking", true, "three routes agree"));
        int worst = 0;
        DirectionSampler sampler(c, nullptr, cfg.seed + 3000);
        for (int k = 0; k < cfg.banchoff_dirs; ++k) {
          const BanchoffCheck b = banchoff_check(c, sampler.next().direction.u, sl.value, samples);
          worst = std::max(worst, std::abs(b.residual) + (b.inflections_match_zeros ? 0 : 1));
        }
        r.checks.push_back({"banchoff", worst == 0 ? CheckStatus::pass : CheckStatus::fail, double(worst), 0.5,
                            std::to_string(cfg.banchoff_dirs) + " directions"});
        if (cfg.crofton_dirs > 0) {
          const CroftonCheck cm = crofton_milnor_check(c, cfg.crofton_dirs, cfg.seed + 4000);
          r.quantities["crofton_milnor"] = {{"mc_mean", cm.zeros.mean},
                                            {"mc_stderr", cm.zeros.stderr_},
                                            {"length_B_over_pi", cm.length_B_over_pi},
                                            {"total_torsion", cm.total_torsion},
                                            {"total_abs_torsion", cm.total_abs_torsion}};
          r.checks.push_back(detail::bound_check("crofton_milnor", cm.relative_gap, cfg.tol.crofton));
          r.checks.push_back(detail::bound_check("torsion_length", cm.torsion_residual, cfg.tol.residual,
                                                 "|2∫τ − 2 sign(τ) Length(B)|"));
        }
      },
      {ErrorCode::no_self_linking});

  return r;
}

}  // namespace asym
