// asymptote: analyze closed curves with asymptotic framings.
//
//   asymptote analyze   --builtin NAME | --input FILE  [--direction x,y,z] [--seed K] ...
//   asymptote reproduce kovaleva | example2            [--sigma S] [--out DIR]
//   asymptote verify    [--random R] [--dirs N]
//   asymptote export    --builtin NAME | --input FILE | --example2  --out DIR
//
// Exit codes: 0 all checks pass, 1 some identity failed, 2 invalid input,
// 3 numerical failure, 4 I/O failure.

#include "asymptote/asymptote.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <sstream>

namespace {

using namespace asym;

struct Options {
  std::string builtin;
  std::string input;
  std::string direction;
  std::uint64_t seed = 1;
  int dirs = 2000;
  std::size_t samples = 4096;
  double tol = 1e-6;
  double sigma = kDefaultSigma;
  std::string out;
  std::string format = "json";
  int p = 2, q = 3;
  bool p_set = false;
  std::string which;
  int random = 3;
  bool example2 = false;
};

int exit_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::invalid_spec:
    case ErrorCode::imaginary_component:
    case ErrorCode::unsupported_order:
    case ErrorCode::closure_infeasible:
      return 2;
    case ErrorCode::io_failure:
      return 4;
    default:
      return 3;
  }
}

Vec3 parse_direction(const std::string& s) {
  std::stringstream ss(s);
  std::string item;
  std::vector<double> v;
  while (std::getline(ss, item, ',')) {
    try {
      v.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw Error(ErrorCode::invalid_spec, "bad direction component '" + item + "'");
    }
  }
  const Vec3 u = v.size() == 3 ? Vec3(v[0], v[1], v[2]) : Vec3::Zero();
  if (v.size() != 3 || !(u.norm() > 0)) throw Error(ErrorCode::invalid_spec, "direction must be x,y,z and nonzero");
  return u.normalized();
}

void validate(const Options& o) {
  if (o.samples < 256 || (o.samples & (o.samples - 1)) != 0)
    throw Error(ErrorCode::invalid_spec, "--samples must be a power of two >= 256");
  if (!(o.tol > 0)) throw Error(ErrorCode::invalid_spec, "--tol must be positive");
  if (o.format != "json" && o.format != "csv") throw Error(ErrorCode::invalid_spec, "--format is json or csv");
}

ClosedCurve load_curve(const Options& o) {
  if (!o.builtin.empty() && !o.input.empty()) throw Error(ErrorCode::invalid_spec, "give --builtin or --input, not both");
  if (!o.input.empty()) return load_curve_spec(o.input);
  if (o.builtin.empty()) throw Error(ErrorCode::invalid_spec, "no curve: use --builtin NAME or --input FILE");
  Params params;
  if (o.builtin == "torus-knot" || o.builtin == "trefoil" || o.builtin == "cinquefoil") {
    if (o.p_set) params = {{"p", double(o.p)}, {"q", double(o.q)}};
  }
  return builtin::by_name(o.builtin, params);
}

AnalyzeConfig config_from(const Options& o) {
  AnalyzeConfig c;
  if (!o.direction.empty()) c.direction = parse_direction(o.direction);
  c.seed = o.seed;
  c.writhe_dirs = o.dirs;
  c.crofton_dirs = o.dirs;
  c.samples = o.samples;
  c.tol.residual = o.tol;
  return c;
}

void emit(const Options& o, const std::string& json_text, const std::string& csv_text) {
  const std::string& text = o.format == "csv" ? csv_text : json_text;
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  write_text(std::filesystem::path(o.out) / (o.format == "csv" ? "checks.csv" : "report.json"), text);
}

int report_failures(const std::vector<std::string>& failures) {
  if (failures.empty()) return 0;
  std::cerr << "failed:";
  for (const auto& f : failures) std::cerr << " " << f;
  std::cerr << "\n";
  return 1;
}

int cmd_analyze(const Options& o) {
  validate(o);
  const ClosedCurve c = load_curve(o);
  const InvariantReport r = analyze(c, std::nullopt, config_from(o));
  emit(o, to_json(r).dump(2) + "\n", checks_csv(r));
  return report_failures(r.failures());
}

int cmd_reproduce(const Options& o) {
  validate(o);
  AnalyzeConfig cfg = config_from(o);
  Reproduction r;
  if (o.which == "kovaleva")
    r = reproduce_kovaleva(cfg);
  else if (o.which == "example2")
    r = reproduce_example2(o.sigma, cfg);
  else
    throw Error(ErrorCode::invalid_spec, "reproduce kovaleva | example2");
  if (!o.out.empty()) write_bundle(o.out, r);
  if (o.out.empty() || o.format == "json") {
    if (o.out.empty()) std::cout << to_json(r).dump(2) << "\n";
  }
  return report_failures(r.failures());
}

int cmd_verify(const Options& o) {
  validate(o);
  AnalyzeConfig cfg = config_from(o);
  cfg.theorem_dirs = 20;
  std::vector<std::pair<ClosedCurve, std::optional<NormalField>>> cases;
  for (const char* name : {"trefoil", "cinquefoil", "figure-eight", "kovaleva"})
    cases.emplace_back(builtin::by_name(name), std::nullopt);
  const Example2 e = build_example2(o.sigma);
  cases.emplace_back(e.curve, e.loop.n);
  for (int k = 0; k < o.random; ++k) cases.emplace_back(builtin::random_fourier(o.seed * 1000 + k), std::nullopt);
  Json table = Json::array();
  std::vector<std::string> failures;
  Csv csv({"curve", "check", "status", "value", "tolerance"});
  for (const auto& [curve, normal] : cases) {
    const InvariantReport r = analyze(curve, normal, cfg);
    std::string label = curve.name();
    for (const auto& [k, v] : curve.params())
      if (k == "seed") label += "#" + std::to_string(static_cast<long>(v));
    for (const Check& c : r.checks) {
      table.push_back({{"curve", label}, {"check", c.name}, {"status", to_string(c.status)}, {"value", c.value}});
      csv.row(label, c.name, to_string(c.status), c.value, c.tolerance);
    }
    for (const auto& f : r.failures()) failures.push_back(label + ":" + f);
  }
  Json j;
  j["results"] = std::move(table);
  j["failures"] = failures;
  emit(o, j.dump(2) + "\n", csv.str());
  return report_failures(failures);
}

int cmd_export(const Options& o) {
  validate(o);
  if (o.out.empty()) throw Error(ErrorCode::invalid_spec, "export needs --out DIR");
  const std::filesystem::path dir(o.out);
  ClosedCurve c;
  std::optional<NormalField> n;
  if (o.example2) {
    const Example2 e = build_example2(o.sigma);
    c = e.curve;
    n = e.loop.n;
    write_text(dir / "tangent_indicatrix.csv", sphere_csv(e.tangent, 2048));
  } else {
    c = load_curve(o);
  }
  if (!n) n = asymptotic_normal(c);
  const Vec3 u = o.direction.empty() ? random_admissible_direction(c, &*n, o.seed).direction.u : parse_direction(o.direction);
  const PlanarProjection proj = project(c, u);
  write_text(dir / "curve.csv", curve_csv(c, 2048));
  write_json(dir / "curve.json", samples_spec(c, 1024));
  write_text(dir / "frame.csv", frame_csv(c, *n, 1024));
  write_text(dir / "spherical_image.csv", sphere_csv(*n, 2048));
  write_text(dir / "projection.csv", projection_csv(proj, 2048));
  write_text(dir / "crossings.csv", crossings_csv(self_crossings(proj)));
  AnalyzeConfig cfg = config_from(o);
  cfg.direction = u;
  const InvariantReport r = analyze(c, n, cfg);
  write_json(dir / "report.json", to_json(r));
  write_text(dir / "checks.csv", checks_csv(r));
  return report_failures(r.failures());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Invariants of closed curves with asymptotic framings"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--direction", o.direction, "projection direction x,y,z");
    sub->add_option("--seed", o.seed, "seed for random directions");
    sub->add_option("--dirs", o.dirs, "Monte Carlo directions");
    sub->add_option("--samples", o.samples, "projection samples (power of two >= 256)");
    sub->add_option("--tol", o.tol, "pointwise identity tolerance");
    sub->add_option("--sigma", o.sigma, "Example 2 scale");
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--format", o.format, "json or csv");
  };
  auto add_curve = [&](CLI::App* sub) {
    sub->add_option("--builtin", o.builtin, "circle, trefoil, cinquefoil, torus-knot, kovaleva, figure-eight, triple-winding");
    sub->add_option("--input", o.input, "curve spec JSON");
    sub->add_option("--p", o.p, "torus knot p")->each([&](const std::string&) { o.p_set = true; });
    sub->add_option("--q", o.q, "torus knot q")->each([&](const std::string&) { o.p_set = true; });
  };

  auto* analyze_cmd = app.add_subcommand("analyze", "full invariant report for one curve");
  add_common(analyze_cmd);
  add_curve(analyze_cmd);
  auto* reproduce_cmd = app.add_subcommand("reproduce", "rebuild a worked example and check its stated values");
  add_common(reproduce_cmd);
  reproduce_cmd->add_option("which", o.which, "kovaleva | example2")->required();
  auto* verify_cmd = app.add_subcommand("verify", "identity suite on built-ins and random curves");
  add_common(verify_cmd);
  verify_cmd->add_option("--random", o.random, "number of random Fourier curves");
  auto* export_cmd = app.add_subcommand("export", "write curve, frame, projection and report data");
  add_common(export_cmd);
  add_curve(export_cmd);
  export_cmd->add_flag("--example2", o.example2, "export the constructed example");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*analyze_cmd) return cmd_analyze(o);
    if (*reproduce_cmd) return cmd_reproduce(o);
    if (*verify_cmd) return cmd_verify(o);
    if (*export_cmd) return cmd_export(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
