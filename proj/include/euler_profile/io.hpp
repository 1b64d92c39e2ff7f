#pragma once

#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "oracle.hpp"
#include "solver.hpp"
#include "types.hpp"

namespace euler_profile::io {

using json = nlohmann::json;

/// Round-trip safe text form of a double (17 significant digits).
inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string fixed6(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

// ---------------------------------------------------------------------------
// Polylines
// ---------------------------------------------------------------------------

inline std::string polyline_csv(const Polyline& p) {
  std::string out = "x,y\n";
  for (const Point& v : p.vertices()) out += num(v.x) + "," + num(v.y) + "\n";
  return out;
}

inline Polyline parse_polyline_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw IoError("polyline csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "x,y") throw IoError("polyline csv: expected header 'x,y'");
  std::vector<Point> pts;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw IoError("polyline csv: missing comma on line " + std::to_string(row));
    try {
      std::size_t used_x = 0;
      std::size_t used_y = 0;
      const std::string xs = line.substr(0, comma);
      const std::string ys = line.substr(comma + 1);
      const double x = std::stod(xs, &used_x);
      const double y = std::stod(ys, &used_y);
      if (used_x != xs.size() || used_y != ys.size()) throw std::invalid_argument("trailing");
      pts.push_back({x, y});
    } catch (const std::exception&) {
      throw IoError("polyline csv: bad number on line " + std::to_string(row));
    }
  }
  return Polyline(std::move(pts));
}

inline json polyline_json(const Polyline& p, const Params& params) {
  json verts = json::array();
  for (const Point& v : p.vertices()) verts.push_back({v.x, v.y});
  return json{{"a", params.a}, {"h", params.h}, {"L", params.L}, {"vertices", std::move(verts)}};
}

struct PolylineDocument {
  std::optional<Params> params;
  Polyline curve;
};

/// Reads `{"a","h","L","vertices":[[x,y],…]}`; the parameter keys are
/// optional but must come together.
inline PolylineDocument parse_polyline_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw IoError(std::string("polyline json: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("vertices") || !doc["vertices"].is_array()) {
    throw IoError("polyline json: missing 'vertices' array");
  }
  std::vector<Point> pts;
  for (const json& v : doc["vertices"]) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
      throw IoError("polyline json: each vertex must be [x, y]");
    }
    pts.push_back({v[0].get<double>(), v[1].get<double>()});
  }
  std::optional<Params> params;
  const bool has_a = doc.contains("a");
  if (has_a || doc.contains("h") || doc.contains("L")) {
    if (!(has_a && doc.contains("h") && doc.contains("L"))) {
      throw IoError("polyline json: 'a', 'h' and 'L' must be given together");
    }
    params = Params(doc["a"].get<double>(), doc["h"].get<double>(), doc["L"].get<double>());
  }
  return PolylineDocument{params, Polyline(std::move(pts))};
}

// ---------------------------------------------------------------------------
// Solver and oracle outputs
// ---------------------------------------------------------------------------

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "L,F_min,regime\n";
  for (const SweepRow& r : rows) out += num(r.L) + "," + num(r.f_min) + "," + std::string(to_string(r.regime)) + "\n";
  return out;
}

inline json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

inline json profile_metadata(const OptimalProfile& prof) {
  return json{{"regime", std::string(to_string(prof.regime))},
              {"xi_star", optional_number(prof.xi_star)},
              {"eta_star", optional_number(prof.eta_star)},
              {"h_star", prof.h_star},
              {"F_min", prof.f_min},
              {"lambda_bar", optional_number(prof.lambda_bar)},
              {"mu_bar", optional_number(prof.mu_bar)},
              {"unique", prof.unique},
              {"flat_length", prof.flat_length}};
}

inline json oracle_json(const OracleResult& r) {
  return json{{"f_min", r.f_min},
              {"iterations", r.iterations},
              {"converged", r.converged},
              {"area_error", r.area_error},
              {"u", r.u.values}};
}

/// JSON text with a trailing newline; nlohmann prints doubles in their
/// shortest round-trip form.
inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// SVG
// ---------------------------------------------------------------------------

/// Plot in data coordinates: viewBox [0,width]×[0,height], y flipped so the
/// origin is bottom-left. Stroke only.
inline std::string polyline_svg(const std::vector<Point>& vertices, double width, double height) {
  const std::string w = fixed6(width);
  const std::string h = fixed6(height);
  std::string pts;
  for (const Point& v : vertices) {
    if (!pts.empty()) pts += ' ';
    pts += fixed6(v.x) + "," + fixed6(v.y);
  }
  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " + w + " " + h + "\">\n";
  out += "  <g transform=\"matrix(1 0 0 -1 0 " + h + ")\">\n";
  out += "    <polyline fill=\"none\" stroke=\"black\" stroke-width=\"1\" vector-effect=\"non-scaling-stroke\" points=\"" +
         pts + "\"/>\n";
  out += "  </g>\n</svg>\n";
  return out;
}

inline std::string profile_svg(const Polyline& p, const Params& params) {
  return polyline_svg(std::vector<Point>(p.vertices().begin(), p.vertices().end()), params.a, params.h);
}

// ---------------------------------------------------------------------------
// Files
// ---------------------------------------------------------------------------

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read failed on '" + path + "'");
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("write failed on '" + path + "'");
}

/// Polyline from a .json or CSV file (chosen by extension).
inline PolylineDocument load_polyline(const std::string& path) {
  const std::string text = read_file(path);
  if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0) return parse_polyline_json(text);
  std::istringstream in(text);
  return PolylineDocument{std::nullopt, parse_polyline_csv(in)};
}

}  // namespace euler_profile::io
