#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "kernels.hpp"
#include "regime.hpp"
#include "types.hpp"

namespace euler_profile {

// ---------------------------------------------------------------------------
// Functionals
// ---------------------------------------------------------------------------

/// Resistance of a polyline. The integrand (Δy)₊³/(Δx²+Δy²) is constant on
/// each affine piece, so the integral is an exact segment sum. A vertical
/// rise contributes exactly its height.
inline double resistance(const Polyline& p) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    const double dx = p[i + 1].x - p[i].x;
    const double dy = p[i + 1].y - p[i].y;
    if (dy <= 0.0) continue;
    total += dy * dy * dy / (dx * dx + dy * dy);
  }
  return total;
}

/// Area enclosed below the curve inside the a×h box: ah − ∫γ₁γ₂'.
inline double area_below(const Polyline& p, const Params& params) {
  double swept = 0.0;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    swept += (p[i + 1].y - p[i].y) * 0.5 * (p[i].x + p[i + 1].x);
  }
  return params.box_area() - swept;
}

/// Σ Δx·g(slope): the graph energy of a grid function.
inline double graph_energy(const GridFunction& u) {
  double e = 0.0;
  for (std::size_t i = 0; i < u.n(); ++i) e += u.dx() * kernels::g(u.slope(i));
  return e;
}

/// Σ Δx·g**(slope): the relaxed graph energy without boundary jumps.
inline double g_star_energy(const GridFunction& u) {
  double e = 0.0;
  for (std::size_t i = 0; i < u.n(); ++i) e += u.dx() * kernels::g_star(u.slope(i));
  return e;
}

// ---------------------------------------------------------------------------
// Admissibility
// ---------------------------------------------------------------------------

struct AdmissibilityReport {
  bool endpoints_ok = false;
  bool in_box = false;
  bool x_monotone = false;  // class A
  bool y_monotone = false;  // class A⁺ (together with x_monotone)
  bool area_ok = false;
  double area_below = 0.0;
  double area_error = 0.0;

  bool in_class_a() const { return endpoints_ok && in_box && x_monotone && area_ok; }
  bool in_class_a_plus() const { return in_class_a() && y_monotone; }
};

inline AdmissibilityReport check_admissible(const Polyline& p, const Params& params, double tol) {
  if (!(tol > 0.0)) throw InvalidInput("check_admissible: tol must be positive");
  AdmissibilityReport r;
  r.endpoints_ok = std::abs(p.front().x) <= tol && std::abs(p.front().y) <= tol &&
                   std::abs(p.back().x - params.a) <= tol && std::abs(p.back().y - params.h) <= tol;
  r.in_box = std::all_of(p.vertices().begin(), p.vertices().end(), [&](const Point& q) {
    return q.x >= -tol && q.x <= params.a + tol && q.y >= -tol && q.y <= params.h + tol;
  });
  r.x_monotone = true;
  r.y_monotone = true;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    if (p[i + 1].x - p[i].x < 0.0) r.x_monotone = false;
    if (p[i + 1].y - p[i].y < 0.0) r.y_monotone = false;
  }
  r.area_below = area_below(p, params);
  r.area_error = std::abs(r.area_below - params.L);
  r.area_ok = r.area_error <= tol;
  return r;
}

// ---------------------------------------------------------------------------
// Transformations
// ---------------------------------------------------------------------------

/// Point reflection through the box centre with reversed orientation:
/// (x, y) ↦ (a−x, h−y). Maps a curve for area L to one for area ah−L.
inline Polyline reflect(const Polyline& p, const Params& params) {
  std::vector<Point> out;
  out.reserve(p.size());
  for (std::size_t i = p.size(); i-- > 0;) {
    out.push_back({params.a - p[i].x, params.h - p[i].y});
  }
  return Polyline(std::move(out));
}

namespace detail {

// Area below the polyline (0,0), interior..., (a,h) after blending every
// interior ordinate y ↦ (1−|σ|)y + σ₊h.
inline double blended_area(const std::vector<Point>& pts, const Params& params, double sigma) {
  const double keep = 1.0 - std::abs(sigma);
  const double lift = std::max(sigma, 0.0) * params.h;
  double swept = 0.0;
  auto y_at = [&](std::size_t i) {
    if (i == 0 || i + 1 == pts.size()) return pts[i].y;
    return keep * pts[i].y + lift;
  };
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    swept += (y_at(i + 1) - y_at(i)) * 0.5 * (pts[i].x + pts[i + 1].x);
  }
  return params.box_area() - swept;
}

}  // namespace detail

/// Re-matches the area of a curve from (0,0) to (a,h) by the vertical blend
/// of its interior vertices toward 0 (σ < 0) or toward h (σ > 0). The area
/// is affine in σ on each half of [−1, 1], so σ is solved exactly.
/// Returns the blended vertex list; throws if L is out of reach.
inline std::vector<Point> match_area_by_blend(std::vector<Point> pts, const Params& params) {
  const double a_mid = detail::blended_area(pts, params, 0.0);
  double sigma = 0.0;
  if (params.L < a_mid) {
    const double a_lo = detail::blended_area(pts, params, -1.0);
    if (params.L < a_lo || a_mid - a_lo <= 0.0) {
      throw InvalidInput("match_area_by_blend: area L below reach of the blend");
    }
    sigma = -(a_mid - params.L) / (a_mid - a_lo);
  } else if (params.L > a_mid) {
    const double a_hi = detail::blended_area(pts, params, 1.0);
    if (params.L > a_hi || a_hi - a_mid <= 0.0) {
      throw InvalidInput("match_area_by_blend: area L above reach of the blend");
    }
    sigma = (params.L - a_mid) / (a_hi - a_mid);
  }
  const double keep = 1.0 - std::abs(sigma);
  const double lift = std::max(sigma, 0.0) * params.h;
  for (std::size_t i = 1; i + 1 < pts.size(); ++i) pts[i].y = keep * pts[i].y + lift;
  return pts;
}

// ---------------------------------------------------------------------------
// Curve families
// ---------------------------------------------------------------------------

/// Two-segment test curve (0,0) → (0,r) → (a,h). Its resistance is
/// r + (h−r)³/(a²+(h−r)²).
inline Polyline test_curve_r(const Params& params, double r) {
  if (!(r >= 0.0 && r <= params.h)) {
    throw InvalidInput("test_curve_r: r must lie in [0, h]");
  }
  return Polyline(dedupe({{0.0, 0.0}, {0.0, r}, {params.a, params.h}}));
}

/// Sawtooth γⁿ on a = h = 1/2: n rightward strokes of width 1/2 rising 1/(2n),
/// separated by n−1 flat returns to x = 0. Area below is 1/8 for every n
/// while the resistance 1/(2(n²+1)) tends to zero.
inline Polyline sawtooth_counterexample(int n) {
  if (n < 2) throw InvalidInput("sawtooth_counterexample: need n >= 2");
  const double step = 1.0 / (2.0 * n);
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(2 * n));
  pts.push_back({0.0, 0.0});
  for (int j = 1; j < n; ++j) {
    pts.push_back({0.5, j * step});
    pts.push_back({0.0, j * step});
  }
  pts.push_back({0.5, 0.5});
  return Polyline(std::move(pts));
}

inline Params sawtooth_params() { return Params(0.5, 0.5, 0.125); }

inline bool in_band(const Params& params) { return classify(params) == Regime::NonuniqueBand; }

/// Canonical band solution through (0,0), (0,p), (a,p+a), (a,h) with
/// p = L/a − a/2.
inline Polyline gamma_circle(const Params& params) {
  if (!in_band(params)) {
    throw RegimeError("gamma_circle: need h > a and a^2 < 2L < 2ah - a^2");
  }
  const double p = params.L / params.a - params.a / 2.0;
  return Polyline({{0.0, 0.0}, {0.0, p}, {params.a, p + params.a}, {params.a, params.h}});
}

/// Validates a band profile built from vertical and slope-1 pieces.
/// `interior` lists the vertices strictly between (0,0) and (a,h).
inline Polyline nonunique_profile(const Params& params, const std::vector<Point>& interior) {
  if (!in_band(params)) {
    throw RegimeError("nonunique_profile: parameters outside the nonuniqueness band");
  }
  constexpr double kTol = 1e-12;
  const double scale = std::max({1.0, params.a, params.h});
  const double tol = kTol * scale;

  std::vector<Point> pts;
  pts.reserve(interior.size() + 2);
  pts.push_back({0.0, 0.0});
  pts.insert(pts.end(), interior.begin(), interior.end());
  pts.push_back({params.a, params.h});

  auto fail = [](std::size_t i, const std::string& why) {
    std::ostringstream msg;
    msg << "nonunique_profile: vertex " << i << ": " << why;
    throw InvalidSpec(msg.str());
  };
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Point& q = pts[i];
    if (!std::isfinite(q.x) || !std::isfinite(q.y)) fail(i, "non-finite coordinate");
    if (q.x < -tol || q.x > params.a + tol || q.y < -tol || q.y > params.h + tol) {
      fail(i, "outside the box");
    }
    if (q.y < q.x - tol || q.y > params.h - params.a + q.x + tol) {
      fail(i, "outside the region x <= y <= h - a + x");
    }
    if (i == 0) continue;
    const double dx = q.x - pts[i - 1].x;
    const double dy = q.y - pts[i - 1].y;
    if (dx < -tol) fail(i, "x decreases");
    if (dy <= tol) fail(i, "y must increase strictly");
    const bool vertical = std::abs(dx) <= tol;
    const bool diagonal = dx > tol && std::abs(dx - dy) <= tol;
    if (!vertical && !diagonal) fail(i, "segment is neither vertical nor of slope 1");
  }
  Polyline out(std::move(pts));
  const double err = std::abs(area_below(out, params) - params.L);
  if (err > 1e-9) {
    std::ostringstream msg;
    msg << "nonunique_profile: vertex " << out.size() - 1 << ": area mismatch " << err;
    throw InvalidSpec(msg.str());
  }
  return out;
}

namespace detail {

inline std::vector<double> sorted_uniform(std::mt19937_64& rng, std::size_t k, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(k);
  for (double& x : v) x = dist(rng);
  std::sort(v.begin(), v.end());
  return v;
}

// Random split of `total` into k ≥ 1 nonnegative parts.
inline std::vector<double> random_partition(std::mt19937_64& rng, std::size_t k, double total) {
  std::vector<double> cuts = sorted_uniform(rng, k - 1, 0.0, total);
  std::vector<double> parts(k);
  double prev = 0.0;
  for (std::size_t i = 0; i + 1 < k; ++i) {
    parts[i] = cuts[i] - prev;
    prev = cuts[i];
  }
  parts[k - 1] = total - prev;
  return parts;
}

}  // namespace detail

/// Random interior vertex list for the band family: `pieces` slope-1 runs of
/// random length, with the total vertical rise h − a split between two
/// randomly chosen gaps so that the area identity holds.
inline std::vector<Point> random_nonunique_spec(const Params& params, int pieces, std::uint64_t seed) {
  if (!in_band(params)) {
    throw RegimeError("random_nonunique_spec: parameters outside the nonuniqueness band");
  }
  if (pieces < 1) throw InvalidInput("random_nonunique_spec: need at least one slope-1 run");
  std::mt19937_64 rng(seed);
  const auto m = static_cast<std::size_t>(pieces);
  std::vector<double> runs = detail::random_partition(rng, m, params.a);
  for (double& r : runs) r = params.a * (0.2 / m) + 0.8 * r;  // no vanishing runs
  const double climb = params.h - params.a;

  // Runs preceding the first gap get base height Σ previous runs; placing
  // the rise in gap j lifts every later run by the rise.
  auto area_with_rise_at = [&](std::size_t gap) {
    double area = 0.0;
    double base = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      if (j == gap) base += climb;
      area += runs[j] * (base + 0.5 * runs[j]);
      base += runs[j];
    }
    return area;
  };
  std::uniform_int_distribution<std::size_t> pick(0, m);
  std::size_t early = pick(rng);
  std::size_t late = pick(rng);
  if (early > late) std::swap(early, late);
  if (early == late || params.L > area_with_rise_at(early) || params.L < area_with_rise_at(late)) {
    early = 0;
    late = m;
  }
  const double a_early = area_with_rise_at(early);
  const double a_late = area_with_rise_at(late);
  const double theta = (params.L - a_late) / (a_early - a_late);  // share of the early rise
  std::vector<double> rises(m + 1, 0.0);
  rises[early] = theta * climb;
  rises[late] = (1.0 - theta) * climb;
  const double tiny = 1e-12 * std::max({1.0, params.a, params.h});
  for (double& r : rises) {
    if (r < tiny) r = 0.0;
  }

  std::vector<Point> pts{{0.0, 0.0}};
  double x = 0.0;
  double y = 0.0;
  for (std::size_t j = 0; j <= m; ++j) {
    y += rises[j];
    pts.push_back({x, y});
    if (j < m) {
      x += runs[j];
      y += runs[j];
      pts.push_back({std::min(x, params.a), y});
    }
  }
  // The summed runs and rises land on (a, h) only up to round-off.
  pts.back() = {params.a, params.h};
  pts = dedupe(std::move(pts));
  while (pts.size() > 2) {
    const Point& q = pts[pts.size() - 2];
    if (std::abs(q.x - params.a) > 4 * tiny || std::abs(q.y - params.h) > 4 * tiny) break;
    pts.erase(pts.end() - 2);
  }
  return std::vector<Point>(pts.begin() + 1, pts.end() - 1);
}

/// Monotone staircase from (0,0) to (a,h) of k alternating risers and
/// treads. Only risers carry resistance, so the value is exactly h.
inline Polyline staircase_maximizer(const Params& params, int k, std::uint64_t seed) {
  if (k < 2) throw InvalidInput("staircase_maximizer: need k >= 2");
  std::mt19937_64 rng(seed);
  const auto steps = static_cast<std::size_t>(k);
  const std::vector<double> breaks = detail::sorted_uniform(rng, steps - 1, 0.0, params.a);
  const std::vector<double> levels = detail::sorted_uniform(rng, steps, 0.0, params.h);

  // Area = Σ tread·level is affine in the level blend; solve it directly.
  std::vector<double> treads(steps);
  double prev = 0.0;
  for (std::size_t i = 0; i < steps; ++i) {
    const double next = (i + 1 < steps) ? breaks[i] : params.a;
    treads[i] = next - prev;
    prev = next;
  }
  double a_mid = 0.0;
  for (std::size_t i = 0; i < steps; ++i) a_mid += treads[i] * levels[i];
  const double sigma = (params.L <= a_mid) ? -(a_mid - params.L) / a_mid
                                           : (params.L - a_mid) / (params.box_area() - a_mid);
  const double keep = 1.0 - std::abs(sigma);
  const double lift = std::max(sigma, 0.0) * params.h;

  std::vector<Point> pts{{0.0, 0.0}};
  double x = 0.0;
  for (std::size_t i = 0; i < steps; ++i) {
    const double level = keep * levels[i] + lift;
    pts.push_back({x, level});
    x = (i + 1 < steps) ? breaks[i] : params.a;
    pts.push_back({x, level});
  }
  pts.push_back({params.a, params.h});
  return Polyline(dedupe(std::move(pts)));
}

/// Random curve in class A⁺ (both coordinates nondecreasing) with k interior
/// vertices, area matched by the vertical blend. Deterministic in `seed`.
inline Polyline random_monotone(const Params& params, int k, std::uint64_t seed) {
  if (k < 1) throw InvalidInput("random_monotone: need k >= 1 interior vertices");
  std::mt19937_64 rng(seed);
  const auto count = static_cast<std::size_t>(k);
  std::vector<double> xs = detail::sorted_uniform(rng, count, 0.0, params.a);
  const std::vector<double> ys = detail::sorted_uniform(rng, count, 0.0, params.h);

  // The blend reaches areas in [(a − x_k)h/2, ah − x_1·h/2]; pin the extreme
  // abscissa to the box edge when L lies outside that window.
  if (params.L <= (params.a - xs.back()) * params.h / 2.0) xs.back() = params.a;
  if (params.L >= params.box_area() - xs.front() * params.h / 2.0) xs.front() = 0.0;

  std::vector<Point> pts{{0.0, 0.0}};
  for (std::size_t i = 0; i < count; ++i) pts.push_back({xs[i], ys[i]});
  pts.push_back({params.a, params.h});
  return Polyline(dedupe(match_area_by_blend(std::move(pts), params)));
}

// ---------------------------------------------------------------------------
// Graph conversion
// ---------------------------------------------------------------------------

/// Samples a strictly x-increasing polyline starting at x = 0 on a uniform
/// grid of n segments.
inline GridFunction to_graph(const Polyline& p, int n) {
  if (n < 1) throw InvalidInput("to_graph: need n >= 1");
  if (p.front().x != 0.0) throw ConversionError("to_graph: curve must start at x = 0");
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    if (!(p[i + 1].x > p[i].x)) {
      throw ConversionError("to_graph: x not strictly increasing at segment " + std::to_string(i));
    }
  }
  const double a = p.back().x;
  std::vector<double> values(static_cast<std::size_t>(n) + 1);
  std::size_t seg = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double x = (i + 1 == values.size()) ? a : a * static_cast<double>(i) / n;
    while (seg + 2 < p.size() && p[seg + 1].x < x) ++seg;
    const Point& l = p[seg];
    const Point& r = p[seg + 1];
    if (x == l.x) {
      values[i] = l.y;
    } else if (x == r.x) {
      values[i] = r.y;
    } else {
      values[i] = l.y + (r.y - l.y) * (x - l.x) / (r.x - l.x);
    }
  }
  return GridFunction(a, std::move(values));
}

inline Polyline from_graph(const GridFunction& u) {
  std::vector<Point> pts(u.values.size());
  for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = {u.x(i), u.values[i]};
  pts.back().x = u.a;
  return Polyline(std::move(pts));
}

// ---------------------------------------------------------------------------
// Monotone rearrangement
// ---------------------------------------------------------------------------

namespace detail {

// Piecewise linear interpolation of u through the selected nodes.
inline std::vector<double> interpolate_nodes(const std::vector<double>& u, const std::vector<bool>& keep) {
  std::vector<double> out(u.size());
  std::size_t left = 0;
  for (std::size_t i = 1; i < u.size(); ++i) {
    if (!keep[i]) continue;
    out[left] = u[left];
    for (std::size_t j = left + 1; j < i; ++j) {
      const double t = static_cast<double>(j - left) / static_cast<double>(i - left);
      out[j] = u[left] + t * (u[i] - u[left]);
    }
    out[i] = u[i];
    left = i;
  }
  return out;
}

}  // namespace detail

/// Nondecreasing replacement of u with the same endpoints and area and no
/// larger Σ Δx·g**(slope).
///
/// The lower envelope interpolates u at the nodes where u equals its suffix
/// minimum, the upper one at the nodes where u equals its prefix maximum.
/// Both have vertices on the graph of u, so Jensen on each gap gives no
/// larger g** energy; both are monotone, and u_- ≤ u ≤ u_+ brackets the area.
/// The energy is convex in u, so the area-matching convex combination keeps
/// the bound.
inline GridFunction monotone_rearrange(const GridFunction& u) {
  const std::vector<double>& v = u.values;
  const double lo = v.front();
  const double hi = v.back();
  for (double y : v) {
    if (y < lo || y > hi) {
      throw DomainError("monotone_rearrange: values must lie between the endpoint values");
    }
  }
  if (std::is_sorted(v.begin(), v.end())) return u;

  const std::size_t n = v.size();
  std::vector<bool> lower_keep(n, false);
  std::vector<bool> upper_keep(n, false);
  double run = v.back();
  for (std::size_t i = n; i-- > 0;) {
    run = std::min(run, v[i]);
    lower_keep[i] = v[i] == run;
  }
  run = v.front();
  for (std::size_t i = 0; i < n; ++i) {
    run = std::max(run, v[i]);
    upper_keep[i] = v[i] == run;
  }
  const GridFunction lower(u.a, detail::interpolate_nodes(v, lower_keep));
  const GridFunction upper(u.a, detail::interpolate_nodes(v, upper_keep));
  const double target = u.area();
  const double a_lo = lower.area();
  const double a_hi = upper.area();
  const double theta = (a_hi > a_lo) ? std::clamp((target - a_lo) / (a_hi - a_lo), 0.0, 1.0) : 0.0;
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = (1.0 - theta) * lower.values[i] + theta * upper.values[i];
  w.front() = lo;
  w.back() = hi;
  return GridFunction(u.a, std::move(w));
}

}  // namespace euler_profile
