#pragma once

// The two worked examples: build, run the suite, compare with the stated
// targets, and collect the plot data.

#include "asymptote/builtins.hpp"
#include "asymptote/construction.hpp"
#include "asymptote/io.hpp"
#include "asymptote/report.hpp"

#include <filesystem>
#include <map>
#include <string>

namespace asym {

struct Reproduction {
  InvariantReport report;
  std::vector<Check> targets;
  Json provenance = Json::object();
  std::map<std::string, std::string> files;  // file name → contents

  std::vector<std::string> failures() const {
    std::vector<std::string> out = report.failures();
    for (const Check& c : targets)
      if (c.status != CheckStatus::pass) out.push_back("target:" + c.name);
    return out;
  }
};

inline Check integer_target(const std::string& name, long got, long want) {
  return {name, got == want ? CheckStatus::pass : CheckStatus::fail, double(got), double(want),
          "expected " + std::to_string(want) + ", got " + std::to_string(got)};
}

inline Json to_json(const Reproduction& r) {
  Json j;
  j["report"] = to_json(r.report);
  Json t = Json::object();
  for (const Check& c : r.targets) t[c.name] = {{"status", to_string(c.status)}, {"value", c.value}, {"detail", c.detail}};
  j["targets"] = std::move(t);
  j["provenance"] = r.provenance;
  j["failures"] = r.failures();
  return j;
}

namespace detail {

/// Values on the e₃ projection shared by both examples.
inline void e3_targets(Reproduction& out, const ClosedCurve& c, const NormalField& n, long cr_want, long zeros_want,
                       long lk_want) {
  const PlanarProjection proj = project(c, Vec3::UnitZ());
  const auto cs = self_crossings(proj);
  out.targets.push_back(integer_target("cr_e3", crossing_number(cs), cr_want));
  out.targets.push_back(integer_target("zeros_e3", normal_direction_zeros(n, Vec3::UnitZ()).count, zeros_want));
  const long lk = out.report.lk_gauss ? out.report.lk_gauss->integer : std::numeric_limits<long>::min();
  out.targets.push_back(integer_target("lk", lk, lk_want));
  out.files["projection.csv"] = projection_csv(proj, 2048);
  out.files["crossings.csv"] = crossings_csv(cs);
  out.files["spherical_image.csv"] = sphere_csv(n, 2048);
  out.files["frame.csv"] = frame_csv(c, n, 1024);
}

}  // namespace detail

inline Reproduction reproduce_kovaleva(AnalyzeConfig cfg = {}) {
  Reproduction out;
  const ClosedCurve c = builtin::kovaleva();
  cfg.direction = Vec3::UnitZ();
  out.report = analyze(c, std::nullopt, cfg);
  const NormalField n = asymptotic_normal(c);
  detail::e3_targets(out, c, n, 0, 0, 0);
  FramingOptions fo;
  fo.require_asymptotic = false;
  const FramedCurve f(c, n, fo);
  out.targets.push_back({"min_abs_tau_g", f.min_abs_tau() > 0 && f.tau_sign_changes() == 0 ? CheckStatus::pass
                                                                                             : CheckStatus::fail,
                         f.min_abs_tau(), 0.0,
                         std::to_string(f.tau_sign_changes()) + " sign changes of τ_g"});
  const InjectivityResult inj = spherical_image_injective(n);
  out.targets.push_back({"n_not_injective", !inj.injective ? CheckStatus::pass : CheckStatus::fail,
                         double(inj.pairs.size()), 0.0, "self-intersections of the spherical image"});
  out.files["curve.csv"] = curve_csv(c, 2048);
  return out;
}

inline Reproduction reproduce_example2(double sigma = kDefaultSigma, AnalyzeConfig cfg = {}) {
  Reproduction out;
  const Example2 e = build_example2(sigma);
  cfg.direction = Vec3::UnitZ();
  out.report = analyze(e.curve, e.loop.n, cfg);
  detail::e3_targets(out, e.curve, e.loop.n, 2, 0, 2);
  bool positive = true;
  for (double c : e.closure.coefficients) positive = positive && c > 0;
  out.targets.push_back({"coefficients_positive", positive ? CheckStatus::pass : CheckStatus::fail, 0.0, 0.0, ""});
  out.targets.push_back(detail::bound_check("closure_residual", e.closure.residual, 1e-8));
  const Vec3 gap = e.curve.position(kTwoPi) - e.curve.position(0.0);
  out.targets.push_back(detail::bound_check("closure_gap", gap.norm(), 1e-8));
  const InjectivityResult inj = spherical_image_injective(e.loop.n);
  out.targets.push_back(
      {"n_injective", inj.injective && !inj.inconclusive ? CheckStatus::pass : CheckStatus::fail, 0.0, 0.0, ""});
  out.targets.push_back(integer_target("inflections", long(inflections(*e.framed).zeros.size()), 2));
  const int rot = rotation_index(project(e.curve, Vec3::UnitZ()));
  out.targets.push_back(integer_target("abs_rotation_index_e3", std::abs(rot), 1));
  out.targets.push_back(integer_target("tangent_cusps", long(e.cusps.size()), 2));
  out.targets.push_back(
      {"hull_contains_origin", e.hull.contains ? CheckStatus::pass : CheckStatus::fail, e.hull.margin, 0.0, ""});

  out.provenance = {{"sigma", sigma},
                    {"anchors", e.basis.anchors},
                    {"exponent", e.basis.exponent},
                    {"offset", e.basis.offset},
                    {"coefficients", e.closure.coefficients},
                    {"closure_residual", e.closure.residual},
                    {"closure_gap", gap.norm()},
                    {"hull_margin", e.hull.margin}};
  Json spec = samples_spec(e.curve, 1024);
  spec["provenance"] = out.provenance;
  out.files["curve.json"] = spec.dump(2) + "\n";
  out.files["curve.csv"] = curve_csv(e.curve, 2048);
  out.files["tangent_indicatrix.csv"] = sphere_csv(e.tangent, 2048);
  Csv anchors({"i", "t", "x", "y", "z"});
  for (std::size_t i = 0; i < e.basis.anchors.size(); ++i) {
    const Vec3 p = e.tangent.at(e.basis.anchors[i]);
    anchors.row(i + 1, e.basis.anchors[i], p.x(), p.y(), p.z());
  }
  out.files["anchors.csv"] = anchors.str();
  return out;
}

inline void write_bundle(const std::filesystem::path& dir, const Reproduction& r) {
  for (const auto& [name, text] : r.files) write_text(dir / name, text);
  write_json(dir / "report.json", to_json(r));
  write_text(dir / "checks.csv", checks_csv(r.report));
}

}  // namespace asym
