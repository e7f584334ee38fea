#pragma once

// Curve spec files and plain-data exports.
//
//   {"kind": "builtin", "name": "torus-knot", "params": {"p": 2, "q": 3}}
//   {"kind": "samples", "points": [[x, y, z], ...]}   (uniform in t on [0, 2π))

#include "asymptote/builtins.hpp"
#include "asymptote/curve.hpp"
#include "asymptote/error.hpp"
#include "asymptote/framing.hpp"
#include "asymptote/projection.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

namespace asym {

using Json = nlohmann::ordered_json;

inline ClosedCurve curve_from_spec(const Json& spec) {
  try {
    const std::string kind = spec.at("kind").get<std::string>();
    if (kind == "builtin") {
      Params params;
      if (spec.contains("params"))
        for (const auto& [k, v] : spec.at("params").items()) params.emplace_back(k, v.get<double>());
      return builtin::by_name(spec.at("name").get<std::string>(), params);
    }
    if (kind == "samples") {
      std::vector<Vec3> pts;
      for (const auto& p : spec.at("points")) {
        if (p.size() != 3) throw Error(ErrorCode::invalid_spec, "sample points need 3 coordinates");
        pts.emplace_back(p[0].get<double>(), p[1].get<double>(), p[2].get<double>());
      }
      return fourier_fit(pts, spec.value("name", std::string("samples")));
    }
    throw Error(ErrorCode::invalid_spec, "unknown curve kind '" + kind + "'");
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::invalid_spec, std::string("malformed curve spec: ") + e.what());
  }
}

inline Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_failure, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::invalid_spec, path.string() + ": " + e.what());
  }
}

inline ClosedCurve load_curve_spec(const std::filesystem::path& path) { return curve_from_spec(read_json(path)); }

inline Json samples_spec(const ClosedCurve& curve, std::size_t n) {
  Json j;
  j["kind"] = "samples";
  j["name"] = curve.name();
  Json pts = Json::array();
  for (const Vec3& p : sample(curve, n)) pts.push_back({p.x(), p.y(), p.z()});
  j["points"] = std::move(pts);
  return j;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io_failure, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::io_failure, "write failed for " + path.string());
}

inline void write_json(const std::filesystem::path& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

// ---- CSV ------------------------------------------------------------------

class Csv {
 public:
  explicit Csv(std::vector<std::string> header) : cols_(header.size()) {
    os_ << std::setprecision(17);
    for (std::size_t i = 0; i < header.size(); ++i) os_ << (i ? "," : "") << header[i];
    os_ << "\n";
  }
  template <class... A>
  void row(const A&... a) {
    std::size_t i = 0;
    ((os_ << (i++ ? "," : "") << a), ...);
    os_ << "\n";
  }
  std::string str() const { return os_.str(); }
  std::size_t columns() const { return cols_; }

 private:
  std::ostringstream os_;
  std::size_t cols_;
};

inline std::string curve_csv(const ClosedCurve& curve, std::size_t n) {
  Csv c({"t", "x", "y", "z"});
  for (std::size_t i = 0; i < n; ++i) {
    const double t = kTwoPi * double(i) / double(n);
    const Vec3 p = curve.position(t);
    c.row(t, p.x(), p.y(), p.z());
  }
  return c.str();
}

inline std::string frame_csv(const ClosedCurve& curve, const NormalField& n, std::size_t grid) {
  Csv c({"t", "T_x", "T_y", "T_z", "n_perp_x", "n_perp_y", "n_perp_z", "n_x", "n_y", "n_z", "kappa_g", "tau_g"});
  for (std::size_t i = 0; i < grid; ++i) {
    const double t = kTwoPi * double(i) / double(grid);
    const DarbouxPoint p = darboux_at(curve, n, t);
    c.row(t, p.T.x(), p.T.y(), p.T.z(), p.n_perp.x(), p.n_perp.y(), p.n_perp.z(), p.n.x(), p.n.y(), p.n.z(), p.kappa_g,
          p.tau_g);
  }
  return c.str();
}

/// Points of a field on the sphere (spherical image or tangent indicatrix).
inline std::string sphere_csv(const NormalField& f, std::size_t grid) {
  Csv c({"t", "x", "y", "z"});
  for (std::size_t i = 0; i < grid; ++i) {
    const double t = kTwoPi * double(i) / double(grid);
    const Vec3 p = f.at(t);
    c.row(t, p.x(), p.y(), p.z());
  }
  return c.str();
}

inline std::string projection_csv(const PlanarProjection& proj, std::size_t grid) {
  Csv c({"t", "x", "y", "height"});
  for (std::size_t i = 0; i < grid; ++i) {
    const double t = kTwoPi * double(i) / double(grid);
    const Vec2 p = proj.point(t);
    c.row(t, p.x(), p.y(), proj.height(t));
  }
  return c.str();
}

inline std::string crossings_csv(const std::vector<Crossing>& cs) {
  Csv c({"t_plus", "t_minus", "x", "y", "sign", "kind"});
  for (const Crossing& x : cs) c.row(x.t_plus, x.t_minus, x.point.x(), x.point.y(), x.sign, to_string(x.kind));
  return c.str();
}

}  // namespace asym
