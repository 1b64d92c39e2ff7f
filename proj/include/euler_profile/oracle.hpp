#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <utility>
#include <vector>

#include "curve.hpp"
#include "errors.hpp"
#include "kernels.hpp"
#include "types.hpp"

namespace euler_profile {

struct OracleResult {
  double f_min = 0.0;
  GridFunction u;
  long iterations = 0;
  bool converged = false;
  double area_error = 0.0;
};

struct AnnealResult {
  Polyline curve;
  double f;
};

/// h + Σ Δx·ψ(slope). Jumps at x = 0 and x = a are priced implicitly since
/// Σ Δx·slope = u_n − u_0.
inline double relaxed_energy(const GridFunction& u, const Params& params) {
  const double slack = 1e-12 * std::max(1.0, params.h);
  for (std::size_t i = 0; i < u.n(); ++i) {
    if (u.values[i + 1] < u.values[i] - slack) {
      throw DomainError("relaxed_energy: grid function is not monotone");
    }
  }
  double e = params.h;
  for (std::size_t i = 0; i < u.n(); ++i) e += u.dx() * kernels::psi(u.slope(i));
  return e;
}

namespace detail {

// Isotonic regression (unit weights) by pool-adjacent-violators, in place.
inline void pava(std::vector<double>& v) {
  std::vector<double> mean;
  std::vector<std::size_t> count;
  mean.reserve(v.size());
  count.reserve(v.size());
  for (double x : v) {
    mean.push_back(x);
    count.push_back(1);
    while (mean.size() > 1 && mean[mean.size() - 2] > mean.back()) {
      const std::size_t c = count[count.size() - 2] + count.back();
      const double m = (mean[mean.size() - 2] * count[count.size() - 2] + mean.back() * count.back()) / c;
      mean.pop_back();
      count.pop_back();
      mean.back() = m;
      count.back() = c;
    }
  }
  std::size_t k = 0;
  for (std::size_t b = 0; b < mean.size(); ++b) {
    for (std::size_t j = 0; j < count[b]; ++j) v[k++] = mean[b];
  }
}

// Projection onto {nondecreasing} ∩ [0, h]ⁿ⁺¹: clipping an isotonic
// regression gives the bounded isotonic regression.
inline void project_monotone_box(std::vector<double>& v, double h) {
  pava(v);
  for (double& x : v) x = std::clamp(x, 0.0, h);
}

inline double trapezoid(const std::vector<double>& v, double dx) {
  double s = 0.5 * (v.front() + v.back());
  for (std::size_t i = 1; i + 1 < v.size(); ++i) s += v[i];
  return s * dx;
}

// Euclidean projection onto {monotone, box, trapezoid area = L}. The
// minimizer is P(v + νw) with P the monotone-box projection and w the
// trapezoid weights; the area of P(v + νw) is nondecreasing and piecewise
// linear in ν, so ν is found by a safeguarded false position search.
class FeasibleProjector {
 public:
  FeasibleProjector(std::size_t size, double dx, double h, double area)
      : w_(size, dx), h_(h), area_(area), dx_(dx), tmp_(size) {
    w_.front() = w_.back() = 0.5 * dx;
  }

  void operator()(std::vector<double>& v) {
    auto area_at = [&](double nu) {
      for (std::size_t i = 0; i < v.size(); ++i) tmp_[i] = v[i] + nu * w_[i];
      project_monotone_box(tmp_, h_);
      return trapezoid(tmp_, dx_) - area_;
    };
    const double tol = 1e-14 * std::max(1.0, area_);
    double step = std::max(1.0, std::abs(last_nu_)) / dx_;
    double lo = last_nu_;
    double f_lo = area_at(lo);
    if (std::abs(f_lo) <= tol) {
      v = tmp_;
      return;
    }
    double hi = lo;
    double f_hi = f_lo;
    if (f_lo > 0.0) {
      while (f_lo > 0.0) {
        hi = lo;
        f_hi = f_lo;
        lo -= step;
        step *= 2.0;
        f_lo = area_at(lo);
      }
    } else {
      while (f_hi < 0.0) {
        lo = hi;
        f_lo = f_hi;
        hi += step;
        step *= 2.0;
        f_hi = area_at(hi);
      }
    }
    // Illinois false position; bisection fallback keeps the bracket shrinking.
    double nu = lo;
    int side = 0;
    for (int it = 0; it < 200; ++it) {
      nu = (f_hi != f_lo) ? hi - f_hi * (hi - lo) / (f_hi - f_lo) : 0.5 * (lo + hi);
      if (!(nu > lo && nu < hi)) nu = 0.5 * (lo + hi);
      const double f = area_at(nu);
      if (std::abs(f) <= tol || hi - lo <= 1e-15 * std::max(1.0, std::abs(nu))) break;
      if (f < 0.0) {
        lo = nu;
        f_lo = f;
        if (side == -1) f_hi *= 0.5;
        side = -1;
      } else {
        hi = nu;
        f_hi = f;
        if (side == 1) f_lo *= 0.5;
        side = 1;
      }
    }
    last_nu_ = nu;
    v = tmp_;
  }

 private:
  std::vector<double> w_;
  double h_;
  double area_;
  double dx_;
  std::vector<double> tmp_;
  double last_nu_ = 0.0;
};

inline void relaxed_gradient(const std::vector<double>& u, double dx, std::vector<double>& grad) {
  std::fill(grad.begin(), grad.end(), 0.0);
  for (std::size_t i = 0; i + 1 < u.size(); ++i) {
    const double d = kernels::psi_prime((u[i + 1] - u[i]) / dx);
    grad[i] -= d;
    grad[i + 1] += d;
  }
}

inline double relaxed_value(const std::vector<double>& u, double dx, double h) {
  double e = h;
  for (std::size_t i = 0; i + 1 < u.size(); ++i) e += dx * kernels::psi((u[i + 1] - u[i]) / dx);
  return e;
}

}  // namespace detail

/// Minimizes the discretized relaxed energy over nondecreasing grid
/// functions in [0, h] with trapezoid area L.
///
/// Accelerated projected gradient (FISTA with adaptive restart) at the fixed
/// step 0.5·Δx/6. Stops when the gradient-mapping norm drops below `tol` or
/// after 1e5 iterations.
inline OracleResult minimize_relaxed(const Params& params, int n, double tol = 1e-9) {
  if (n < 16) throw InvalidInput("minimize_relaxed: need n >= 16");
  if (!(tol > 0.0)) throw InvalidInput("minimize_relaxed: tol must be positive");
  constexpr long kMaxIterations = 100000;
  const auto size = static_cast<std::size_t>(n) + 1;
  const double dx = params.a / n;
  const double step = 0.5 * dx / 6.0;
  detail::FeasibleProjector project(size, dx, params.h, params.L);

  std::vector<double> x(size);
  for (std::size_t i = 0; i < size; ++i) x[i] = params.h * static_cast<double>(i) / n;
  project(x);
  std::vector<double> y = x;
  std::vector<double> prev = x;
  std::vector<double> grad(size);
  std::vector<double> trial(size);
  double t = 1.0;
  long it = 0;
  bool converged = false;
  for (; it < kMaxIterations; ++it) {
    detail::relaxed_gradient(y, dx, grad);
    for (std::size_t i = 0; i < size; ++i) trial[i] = y[i] - step * grad[i];
    project(trial);

    // Gradient mapping at y; y = x right after a restart, so this measures
    // stationarity of an actual iterate.
    double gm = 0.0;
    for (std::size_t i = 0; i < size; ++i) gm += (y[i] - trial[i]) * (y[i] - trial[i]);
    gm = std::sqrt(gm) / step;
    if (gm < tol) {
      x = trial;
      converged = true;
      ++it;
      break;
    }

    prev.swap(x);
    x = trial;
    double restart = 0.0;
    for (std::size_t i = 0; i < size; ++i) restart += (y[i] - x[i]) * (x[i] - prev[i]);
    if (restart > 0.0) {
      t = 1.0;
      y = x;
      continue;
    }
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    const double beta = (t - 1.0) / t_next;
    for (std::size_t i = 0; i < size; ++i) y[i] = x[i] + beta * (x[i] - prev[i]);
    t = t_next;
  }

  OracleResult out;
  out.u = GridFunction(params.a, x);
  out.f_min = detail::relaxed_value(x, dx, params.h);
  out.iterations = it;
  out.converged = converged;
  out.area_error = std::abs(out.u.area() - params.L);
  return out;
}

// ---------------------------------------------------------------------------
// Annealing on the original functional
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<Point> anneal_start(const Params& params) {
  if (2.0 * params.L >= params.box_area()) {
    const double r = (2.0 * params.L - params.box_area()) / params.a;
    return {{0.0, 0.0}, {0.0, r}, {params.a, params.h}};
  }
  const double r = params.h - 2.0 * params.L / params.a;
  return {{0.0, 0.0}, {params.a, params.h - r}, {params.a, params.h}};
}

inline bool strictly_valid(const std::vector<Point>& pts) {
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (pts[i] == pts[i + 1]) return false;
    if (pts[i + 1].x < pts[i].x) return false;
  }
  return true;
}

inline double segment_sum(const std::vector<Point>& pts) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double dx = pts[i + 1].x - pts[i].x;
    const double dy = pts[i + 1].y - pts[i].y;
    if (dy > 0.0) total += dy * dy * dy / (dx * dx + dy * dy);
  }
  return total;
}

}  // namespace detail

/// Metropolis search over x-monotone polylines from (0,0) to (a,h) inside
/// the box. Proposals: move a vertex (70%), split a segment (15%), drop a
/// vertex (15%); every proposal is re-matched to area L by the vertical
/// blend. Temperature starts at 0.1·h and cools by 0.995 every 100
/// proposals. Deterministic for a fixed seed.
inline AnnealResult anneal_original(const Params& params, long budget, std::uint64_t seed) {
  if (budget < 1) throw InvalidInput("anneal_original: need budget >= 1");
  constexpr std::size_t kMaxVertices = 64;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);

  std::vector<Point> current = detail::anneal_start(params);
  double f_current = detail::segment_sum(current);
  std::vector<Point> best = current;
  double f_best = f_current;
  const double t0 = 0.1 * params.h;
  double temp = t0;
  const double scale = std::max(params.a, params.h);

  for (long k = 0; k < budget; ++k) {
    if (k > 0 && k % 100 == 0) temp *= 0.995;
    const double spread = scale * (0.002 + 0.1 * std::sqrt(temp / t0));
    std::vector<Point> cand = current;
    const std::size_t interior = cand.size() - 2;
    const double roll = unit(rng);
    if (roll < 0.70 && interior > 0) {
      const std::size_t i = 1 + static_cast<std::size_t>(unit(rng) * interior) % interior;
      cand[i].x = std::clamp(cand[i].x + spread * normal(rng), cand[i - 1].x, cand[i + 1].x);
      cand[i].y = std::clamp(cand[i].y + spread * normal(rng), 0.0, params.h);
    } else if (roll < 0.85 || interior == 0) {
      if (cand.size() >= kMaxVertices) continue;
      const std::size_t s = static_cast<std::size_t>(unit(rng) * (cand.size() - 1)) % (cand.size() - 1);
      const double t = unit(rng);
      Point p{cand[s].x + t * (cand[s + 1].x - cand[s].x), cand[s].y + t * (cand[s + 1].y - cand[s].y)};
      p.y = std::clamp(p.y + 0.25 * spread * normal(rng), 0.0, params.h);
      cand.insert(cand.begin() + static_cast<std::ptrdiff_t>(s) + 1, p);
    } else {
      const std::size_t i = 1 + static_cast<std::size_t>(unit(rng) * interior) % interior;
      cand.erase(cand.begin() + static_cast<std::ptrdiff_t>(i));
    }
    try {
      cand = match_area_by_blend(std::move(cand), params);
    } catch (const InvalidInput&) {
      continue;
    }
    cand = dedupe(std::move(cand));
    if (cand.size() < 2 || !detail::strictly_valid(cand)) continue;
    const double f = detail::segment_sum(cand);
    if (f <= f_current || unit(rng) < std::exp(-(f - f_current) / temp)) {
      current = std::move(cand);
      f_current = f;
      if (f_current < f_best) {
        best = current;
        f_best = f_current;
      }
    }
  }
  Polyline curve(std::move(best));
  const double f = resistance(curve);
  return AnnealResult{std::move(curve), f};
}

}  // namespace euler_profile
