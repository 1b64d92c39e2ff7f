#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "curve.hpp"
#include "errors.hpp"
#include "kernels.hpp"
#include "numerics.hpp"
#include "regime.hpp"
#include "types.hpp"

namespace euler_profile {

/// Width below which Ψ and Φ switch to their closed diagonal forms.
inline constexpr double kDiagonalGuard = 1e-7;
/// Absolute tolerance of every adaptive quadrature in this module.
inline constexpr double kQuadratureTol = 1e-11;
/// Argument tolerance of the bisections on Φ.
inline constexpr double kRootTol = 1e-12;
/// Samples of the η scan preceding the golden-section refinement.
inline constexpr int kEtaScan = 256;
/// Default τ-samples of the hypocycloid arc. Uniform τ sampling underestimates
/// the arc energy by roughly a·max g''·Δτ²/24; 8192 keeps that below 1e-9.
inline constexpr int kDefaultSamples = 8192;

/// Endpoint slopes (ξ, η) of the convex arc, 0 ≤ ξ ≤ η ≤ 1. `flat` is the
/// length of a horizontal run at y = 0 preceding the arc (zero on T proper);
/// the arc then spans [flat, a].
struct TPoint {
  double xi = 0.0;
  double eta = 0.0;
  double flat = 0.0;
};

struct OptimalProfile {
  Regime regime;
  std::optional<double> xi_star;
  std::optional<double> eta_star;
  double h_star;
  double f_min;
  Polyline curve;
  std::optional<double> lambda_bar;
  std::optional<double> mu_bar;
  bool unique;
  double flat_length = 0.0;
};

struct SweepRow {
  double L;
  double f_min;
  Regime regime;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<std::pair<double, std::string>> rejected;
};

namespace detail {

inline void check_triangle(double xi, double eta, const char* who) {
  if (!(xi >= 0.0 && eta <= 1.0 && xi <= eta)) {
    throw DomainError(std::string(who) + ": need 0 <= xi <= eta <= 1");
  }
}

// Ψ for an arc of width `width` and total height h.
inline double psi_raw(double xi, double eta, double width, double h) {
  if (eta - xi < kDiagonalGuard) return h - width * xi / (1.0 + xi * xi);
  const double gx = kernels::g_prime(xi);
  const double span = kernels::g_prime(eta) - gx;
  const double q = numerics::adaptive_simpson(
      [&](double t) {
        const double d = 1.0 + t * t;
        return (1.0 - t * t) / (d * d) * (kernels::g_prime(t) - gx) / span;
      },
      xi, eta, kQuadratureTol);
  return h + width * q - width * eta / (1.0 + eta * eta);
}

// Φ for an arc of width `width`.
inline double phi_raw(double xi, double eta, double width) {
  const double w2 = width * width;
  if (eta - xi < kDiagonalGuard) return 0.5 * w2 * xi;
  const double ge = kernels::g_prime(eta);
  const double span = ge - kernels::g_prime(xi);
  const double q = numerics::adaptive_simpson(
      [&](double t) {
        const double r = (ge - kernels::g_prime(t)) / span;
        return r * r;
      },
      xi, eta, kQuadratureTol);
  return 0.5 * w2 * xi + 0.5 * w2 * q;
}

inline bool convex_side(Regime r) {
  return r == Regime::UniqueConvex || r == Regime::DegenerateAffine;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Ψ, Φ and the constraint manifold T
// ---------------------------------------------------------------------------

/// Energy of the convex arc with end slopes (ξ, η) followed by a vertical
/// segment up to h.
inline double psi_big(double xi, double eta, const Params& params) {
  detail::check_triangle(xi, eta, "psi_big");
  return detail::psi_raw(xi, eta, params.a, params.h);
}

/// Area below the convex arc with end slopes (ξ, η). Range [0, a²/2].
inline double phi_big(double xi, double eta, const Params& params) {
  detail::check_triangle(xi, eta, "phi_big");
  return detail::phi_raw(xi, eta, params.a);
}

namespace detail {

inline double solve_xi_raw(double eta, double width, double area) {
  const double scale = std::max(1.0, width * width);
  const double lo_val = phi_raw(0.0, eta, width);
  const double hi_val = 0.5 * width * width * eta;
  if (lo_val > area + 1e-10 * scale || area > hi_val + 1e-10 * scale) {
    throw InfeasibleEta("solve_xi: no xi in [0, eta] reaches the target area");
  }
  if (lo_val >= area) return 0.0;
  if (hi_val <= area) return eta;
  return numerics::bisect_increasing([&](double xi) { return phi_raw(xi, eta, width); }, area, 0.0, eta,
                                     kRootTol);
}

// Largest η with Φ(0, η) ≤ area (1 when the whole range is feasible).
inline double eta_upper(double width, double area, double eta_lo) {
  if (phi_raw(0.0, 1.0, width) <= area) return 1.0;
  return numerics::bisect_increasing([&](double eta) { return phi_raw(0.0, eta, width); }, area, eta_lo, 1.0,
                                     kRootTol);
}

// Height y(η) reached by the arc: ∫ s x'(s) ds in closed form.
inline double arc_height_raw(double xi, double eta, double width) {
  if (eta - xi < kDiagonalGuard) return width * xi;
  const double span = kernels::g_prime(eta) - kernels::g_prime(xi);
  const double moment = eta * kernels::g_prime(eta) - xi * kernels::g_prime(xi) - kernels::g(eta) + kernels::g(xi);
  return width * moment / span;
}

// Shrinks [lo, hi] to the part where the arc stays inside the box,
// height(η) ≤ h. height(lo) ≤ h is required; the feasible part is taken to
// be an interval starting at lo (height increases along both families).
template <class Height>
double height_limited(Height&& height, double lo, double hi, double h) {
  if (height(hi) <= h) return hi;
  // Keep the feasible end of the bracket.
  while (hi - lo > kRootTol) {
    const double mid = 0.5 * (lo + hi);
    (height(mid) <= h ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace detail

/// ξ on the slice {η fixed} of T, found by bisection (Φ is increasing in ξ).
inline double solve_xi(double eta, const Params& params) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw DomainError("solve_xi: eta must lie in [0, 1]");
  return detail::solve_xi_raw(eta, params.a, params.L);
}

/// Minimizer of Ψ on T = {0 ≤ ξ ≤ η ≤ 1, Φ(ξ,η) = L}, restricted to arcs
/// whose end height h* stays ≤ h (the vertical tail cannot be negative; the
/// bound binds for h < a near 2L = ah). On the degenerate boundary
/// 2L = (ah)∧a² this is the diagonal point ξ = η = 2L/a².
inline TPoint minimize_on_T(const Params& params) {
  const Regime regime = classify(params);
  if (!detail::convex_side(regime)) {
    throw RegimeError("minimize_on_T: need 2L <= (ah) ^ a^2");
  }
  const double a2 = params.a * params.a;
  if (regime == Regime::DegenerateAffine) {
    const double s = std::min(2.0 * params.L / a2, 1.0);
    return TPoint{s, s, 0.0};
  }
  const double eta_lo = 2.0 * params.L / a2;
  const double eta_hi = detail::height_limited(
      [&](double eta) { return detail::arc_height_raw(detail::solve_xi_raw(eta, params.a, params.L), eta, params.a); },
      eta_lo, detail::eta_upper(params.a, params.L, eta_lo), params.h);
  auto along_t = [&](double eta) {
    return detail::psi_raw(detail::solve_xi_raw(eta, params.a, params.L), eta, params.a, params.h);
  };
  const numerics::Minimum best = numerics::scan_then_golden(along_t, eta_lo, eta_hi, kEtaScan, 1e-10);
  return TPoint{detail::solve_xi_raw(best.x, params.a, params.L), best.x, 0.0};
}

/// Best curve of the flat-start family: a horizontal run of length a − w at
/// y = 0, then the ξ = 0 arc of width w with w²·Φ₁(0, η) = L. Exists only
/// when Φ(0, 1) > L, i.e. when the full-width arc cannot reach slope 1.
/// Returns nothing when the family is empty.
inline std::optional<TPoint> minimize_flat_start(const Params& params) {
  if (classify(params) != Regime::UniqueConvex) return std::nullopt;
  if (detail::phi_raw(0.0, 1.0, params.a) <= params.L) return std::nullopt;
  const double eta_lo = detail::eta_upper(params.a, params.L, 2.0 * params.L / (params.a * params.a));
  auto width_at = [&](double eta) {
    return std::min(params.a, std::sqrt(params.L / detail::phi_raw(0.0, eta, 1.0)));
  };
  auto height_at = [&](double eta) { return detail::arc_height_raw(0.0, eta, width_at(eta)); };
  if (height_at(eta_lo) > params.h) return std::nullopt;
  const double eta_hi = detail::height_limited(height_at, eta_lo, 1.0, params.h);
  auto energy = [&](double eta) { return detail::psi_raw(0.0, eta, width_at(eta), params.h); };
  const numerics::Minimum best = numerics::scan_then_golden(energy, eta_lo, eta_hi, kEtaScan, 1e-10);
  return TPoint{0.0, best.x, params.a - width_at(best.x)};
}

/// Energy of the curve described by a TPoint.
inline double tpoint_energy(const TPoint& tp, const Params& params) {
  return detail::psi_raw(tp.xi, tp.eta, params.a - tp.flat, params.h);
}

/// Best point over T and the flat-start family.
inline TPoint minimize_convex(const Params& params) {
  const TPoint on_t = minimize_on_T(params);
  const std::optional<TPoint> flat = minimize_flat_start(params);
  if (flat && tpoint_energy(*flat, params) < tpoint_energy(on_t, params)) return *flat;
  return on_t;
}

struct ArcSample {
  Polyline curve;
  double h_star;
};

/// Samples the convex arc x(τ) = flat + w(g'(τ)−g'(ξ))/(g'(η)−g'(ξ)),
/// y(τ) = ∫_ξ^τ s x'(s) ds at m+1 uniform τ nodes, then closes with the
/// vertical segment (a, h*) → (a, h).
inline ArcSample hypocycloid_curve(const TPoint& tp, const Params& params, int m) {
  if (m < 2) throw InvalidInput("hypocycloid_curve: need m >= 2 samples");
  detail::check_triangle(tp.xi, tp.eta, "hypocycloid_curve");
  if (!(tp.eta - tp.xi >= kDiagonalGuard)) {
    throw DegenerateError("hypocycloid_curve: xi == eta, use the affine branch");
  }
  const double width = params.a - tp.flat;
  const double gx = kernels::g_prime(tp.xi);
  const double span = kernels::g_prime(tp.eta) - gx;
  auto x_of = [&](double tau) { return tp.flat + width * (kernels::g_prime(tau) - gx) / span; };
  auto dy = [&](double s) { return s * width * kernels::g_second(s) / span; };

  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(m) + 3);
  pts.push_back({0.0, 0.0});
  pts.push_back({tp.flat, 0.0});
  double y = 0.0;
  double prev_tau = tp.xi;
  const double step_tol = kQuadratureTol / m;
  for (int k = 1; k <= m; ++k) {
    const double tau = (k == m) ? tp.eta : tp.xi + (tp.eta - tp.xi) * k / m;
    y += numerics::adaptive_simpson(dy, prev_tau, tau, step_tol);
    prev_tau = tau;
    pts.push_back({k == m ? params.a : x_of(tau), y});
  }
  // An arc ending at the corner (height-limited optimum) gets no tail;
  // absorb the quadrature round-off there.
  if (std::abs(params.h - y) <= 1e-9 * std::max(1.0, params.h)) pts.back().y = params.h;
  const double h_star = pts.back().y;
  pts.push_back({params.a, params.h});
  // (0,0) coincides with the arc start when there is no flat run.
  return ArcSample{Polyline(dedupe(std::move(pts))), h_star};
}

namespace detail {

struct ConvexSolution {
  TPoint tp;
  double f_min;
};

inline ConvexSolution solve_convex(const Params& params) {
  const TPoint tp = minimize_convex(params);
  return ConvexSolution{tp, tpoint_energy(tp, params)};
}

inline Params mirrored(const Params& params) {
  return Params(params.a, params.h, params.box_area() - params.L);
}

// Profile on the convex side (UniqueConvex or DegenerateAffine).
inline OptimalProfile convex_profile(const Params& params, Regime regime, int samples) {
  if (regime == Regime::DegenerateAffine) {
    const double top = std::min(params.a, params.h);
    Polyline curve(dedupe({{0.0, 0.0}, {params.a, top}, {params.a, params.h}}));
    const double s = top / params.a;
    const double f = params.h <= params.a ? params.h * params.h * params.h /
                                                (params.a * params.a + params.h * params.h)
                                          : params.h - params.a / 2.0;
    return OptimalProfile{regime, s, s, top, f, std::move(curve), 0.0, kernels::g_prime(s), true, 0.0};
  }
  const ConvexSolution sol = solve_convex(params);
  const TPoint& tp = sol.tp;
  if (tp.eta - tp.xi < kDiagonalGuard) {
    // Numerically on the diagonal: straight line of slope ξ plus vertical tail.
    const double top = params.a * tp.xi;
    Polyline curve(dedupe({{0.0, 0.0}, {params.a, top}, {params.a, params.h}}));
    return OptimalProfile{regime, tp.xi, tp.eta, top, sol.f_min, std::move(curve),
                          0.0, kernels::g_prime(tp.xi), true, 0.0};
  }
  ArcSample arc = hypocycloid_curve(tp, params, samples);
  const double width = params.a - tp.flat;
  const double lambda = (kernels::g_prime(tp.eta) - kernels::g_prime(tp.xi)) / width;
  const double mu = kernels::g_prime(tp.xi) - lambda * tp.flat;
  return OptimalProfile{regime, tp.xi, tp.eta, arc.h_star, sol.f_min, std::move(arc.curve),
                        lambda, mu, true, tp.flat};
}

}  // namespace detail

/// Optimal profile for any valid parameter triple.
///
/// Convex side: hypocycloid arc (or the straight diagonal on the boundary)
/// plus a vertical segment at x = a. Reflected side: the mirrored problem
/// L' = ah − L is solved and the curve reflected, so f_min is symmetric by
/// construction; the slope and height fields then describe the mirrored
/// solution. Band: the canonical γ° with value h − a/2.
inline OptimalProfile assemble_solution(const Params& params, int samples = kDefaultSamples) {
  const Regime regime = classify(params);
  switch (regime) {
    case Regime::UniqueConvex:
    case Regime::DegenerateAffine:
      return detail::convex_profile(params, regime, samples);
    case Regime::NonuniqueBand: {
      Polyline curve = gamma_circle(params);
      const double p = params.L / params.a - params.a / 2.0;
      return OptimalProfile{regime, std::nullopt, std::nullopt, p + params.a, params.h - params.a / 2.0,
                            std::move(curve), std::nullopt, std::nullopt, false, 0.0};
    }
    case Regime::DegenerateAffineReflected:
    case Regime::UniqueConcaveReflected: {
      const Params mirror = detail::mirrored(params);
      const Regime mirror_regime =
          regime == Regime::DegenerateAffineReflected ? Regime::DegenerateAffine : Regime::UniqueConvex;
      OptimalProfile base = detail::convex_profile(mirror, mirror_regime, samples);
      base.regime = regime;
      base.curve = reflect(base.curve, mirror);
      // g'(v̇(x)) = g'(u̇(a−x)) = −λx + (λa + μ).
      if (base.lambda_bar && base.mu_bar) {
        const double lambda = *base.lambda_bar;
        base.mu_bar = lambda * params.a + *base.mu_bar;
        base.lambda_bar = -lambda;
      }
      return base;
    }
  }
  throw DomainError("assemble_solution: unknown regime");
}

/// Minimal resistance without building the curve.
inline double solve_fmin(const Params& params) {
  const Regime regime = classify(params);
  switch (regime) {
    case Regime::UniqueConvex:
      return detail::solve_convex(params).f_min;
    case Regime::UniqueConcaveReflected:
      return detail::solve_convex(detail::mirrored(params)).f_min;
    case Regime::DegenerateAffine:
    case Regime::DegenerateAffineReflected:
      return params.h <= params.a ? params.h * params.h * params.h / (params.a * params.a + params.h * params.h)
                                  : params.h - params.a / 2.0;
    case Regime::NonuniqueBand:
      return params.h - params.a / 2.0;
  }
  throw DomainError("solve_fmin: unknown regime");
}

// ---------------------------------------------------------------------------
// Euler–Lagrange check
// ---------------------------------------------------------------------------

struct EulerLagrangeFit {
  double lambda = 0.0;
  double mu = 0.0;
  double residual = 0.0;
  std::size_t pairs = 0;
};

/// Least-squares fit of g'(slope) ≈ λx + μ over the rising non-vertical
/// segments of a polyline (slope at the chord, x at the segment midpoint).
/// Horizontal runs are skipped: the monotonicity constraint is active there.
inline EulerLagrangeFit fit_euler_lagrange(const Polyline& p) {
  std::vector<std::pair<double, double>> data;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    const double dx = p[i + 1].x - p[i].x;
    const double dy = p[i + 1].y - p[i].y;
    if (dx > 0.0 && dy > 0.0) data.emplace_back(0.5 * (p[i].x + p[i + 1].x), kernels::g_prime(dy / dx));
  }
  if (data.empty()) throw NotApplicable("fit_euler_lagrange: no graph part");
  EulerLagrangeFit fit;
  fit.pairs = data.size();
  const double n = static_cast<double>(data.size());
  double mx = 0.0;
  double my = 0.0;
  for (const auto& [x, y] : data) {
    mx += x;
    my += y;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& [x, y] : data) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  fit.lambda = sxx > 0.0 ? sxy / sxx : 0.0;
  fit.mu = my - fit.lambda * mx;
  for (const auto& [x, y] : data) {
    fit.residual = std::max(fit.residual, std::abs(y - (fit.lambda * x + fit.mu)));
  }
  return fit;
}

/// Refits the multipliers on the profile's curve, stores them, and returns
/// the largest deviation from the affine relation.
inline double el_residual(OptimalProfile& profile, const Params& params) {
  (void)params;
  if (profile.regime == Regime::NonuniqueBand) {
    throw NotApplicable("el_residual: undefined in the nonuniqueness band");
  }
  const EulerLagrangeFit fit = fit_euler_lagrange(profile.curve);
  profile.lambda_bar = fit.lambda;
  profile.mu_bar = fit.mu;
  return fit.residual;
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

/// F_min over a list of L values. Grid points are independent and may be
/// evaluated on up to `threads` workers (0: hardware concurrency); rows come
/// back sorted by L. Invalid L values are reported, not fatal.
inline SweepResult fmin_sweep(double a, double h, const std::vector<double>& grid, unsigned threads = 0) {
  struct Slot {
    double L;
    std::optional<SweepRow> row;
    std::string error;
  };
  std::vector<Slot> slots;
  slots.reserve(grid.size());
  for (double L : grid) slots.push_back(Slot{L, std::nullopt, {}});

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < slots.size(); i = next++) {
      try {
        const Params p(a, h, slots[i].L);
        slots[i].row = SweepRow{p.L, solve_fmin(p), classify(p)};
      } catch (const Error& e) {
        slots[i].error = e.what();
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, slots.size())));
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
  }

  SweepResult result;
  for (Slot& s : slots) {
    if (s.row) {
      result.rows.push_back(*s.row);
    } else {
      result.rejected.emplace_back(s.L, s.error);
    }
  }
  std::stable_sort(result.rows.begin(), result.rows.end(),
                   [](const SweepRow& l, const SweepRow& r) { return l.L < r.L; });
  return result;
}

/// L_i = i·ah/(count+1), i = 1..count: `count` interior points of (0, ah).
inline std::vector<double> interior_grid(double a, double h, int count) {
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int i = 1; i <= count; ++i) grid.push_back(a * h * i / (count + 1));
  return grid;
}

}  // namespace euler_profile
