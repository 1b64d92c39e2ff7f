#pragma once

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace euler_profile::numerics {

namespace detail {

template <class F>
double simpson_step(F& f, double a, double fa, double b, double fb, double m, double fm,
                    double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return simpson_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance tol.
/// The interval is split into four panels first so that a symmetric
/// integrand cannot fool the initial error estimate.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double tol = 1e-11, int max_depth = 40) {
  if (a == b) return 0.0;
  double sign = 1.0;
  if (b < a) {
    std::swap(a, b);
    sign = -1.0;
  }
  constexpr int kPanels = 4;
  const double w = (b - a) / kPanels;
  double total = 0.0;
  for (int k = 0; k < kPanels; ++k) {
    const double lo = a + k * w;
    const double hi = (k + 1 == kPanels) ? b : a + (k + 1) * w;
    const double mid = 0.5 * (lo + hi);
    const double flo = f(lo);
    const double fhi = f(hi);
    const double fmid = f(mid);
    const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
    total += detail::simpson_step(f, lo, flo, hi, fhi, mid, fmid, whole, tol / kPanels, max_depth);
  }
  return sign * total;
}

/// Bisection for an increasing function: returns x in [lo, hi] with
/// f(x) ≈ target, stopping once the bracket is narrower than xtol.
/// Caller guarantees f(lo) ≤ target ≤ f(hi).
template <class F>
double bisect_increasing(F&& f, double target, double lo, double hi, double xtol = 1e-12) {
  for (int it = 0; it < 200 && hi - lo > xtol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct Minimum {
  double x;
  double value;
};

/// Golden-section search on [lo, hi] down to bracket width xtol.
template <class F>
Minimum golden_section(F&& f, double lo, double hi, double xtol = 1e-10) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < 300 && hi - lo > xtol; ++it) {
    if (fc <= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
  }
  return fc <= fd ? Minimum{c, fc} : Minimum{d, fd};
}

/// Dense scan of n points on [lo, hi] followed by golden-section refinement
/// inside the bracket around the best sample. Endpoints are always
/// evaluated, so a boundary minimum is returned exactly.
template <class F>
Minimum scan_then_golden(F&& f, double lo, double hi, int n = 256, double xtol = 1e-10) {
  if (!(hi > lo)) return Minimum{lo, f(lo)};
  std::vector<double> xs(static_cast<std::size_t>(n));
  std::vector<double> fs(static_cast<std::size_t>(n));
  std::size_t best = 0;
  for (int i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    xs[k] = (i + 1 == n) ? hi : lo + (hi - lo) * i / (n - 1);
    fs[k] = f(xs[k]);
    if (fs[k] < fs[best]) best = k;
  }
  const double blo = xs[best == 0 ? 0 : best - 1];
  const double bhi = xs[best + 1 == xs.size() ? best : best + 1];
  Minimum m = golden_section(f, blo, bhi, xtol);
  if (fs[best] < m.value) m = Minimum{xs[best], fs[best]};
  return m;
}

}  // namespace euler_profile::numerics
