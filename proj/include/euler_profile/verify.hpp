#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "curve.hpp"
#include "kernels.hpp"
#include "oracle.hpp"
#include "solver.hpp"

namespace euler_profile::verify {

struct CheckResult {
  int id;
  std::string name;
  bool passed;
  std::string detail;
};

namespace detail {

inline std::string fmt(const char* pattern, double v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

// Running record of the worst deviation seen by one check.
struct Tally {
  bool ok = true;
  std::string first_failure;

  void expect(bool cond, const std::string& what) {
    if (!cond && ok) first_failure = what;
    ok = ok && cond;
  }
};

inline std::vector<SweepRow> sweep61(double a, double h) {
  return fmin_sweep(a, h, interior_grid(a, h, 61)).rows;
}

}  // namespace detail

inline CheckResult band_value() {
  detail::Tally t;
  double worst_exact = 0.0;
  double worst_oracle = 0.0;
  for (double L : {0.55, 0.75, 1.0, 1.25, 1.45}) {
    const Params p(1.0, 2.0, L);
    const double exact = std::abs(assemble_solution(p).f_min - 1.5);
    const double oracle = std::abs(minimize_relaxed(p, 200).f_min - 1.5);
    worst_exact = std::max(worst_exact, exact);
    worst_oracle = std::max(worst_oracle, oracle);
    t.expect(exact <= 1e-12, detail::fmt("closed form off at L=%g", L));
    t.expect(oracle <= 2e-3, detail::fmt("oracle off at L=%g", L));
  }
  return {1, "band value h - a/2", t.ok,
          t.ok ? detail::fmt("max |exact-1.5| = %.3g", worst_exact) + detail::fmt(", max |oracle-1.5| = %.3g", worst_oracle)
               : t.first_failure};
}

inline CheckResult degenerate_diagonal() {
  detail::Tally t;
  const Params unit(1.0, 1.0, 0.5);
  const double e1 = std::abs(assemble_solution(unit).f_min - 0.5);
  const double o1 = std::abs(minimize_relaxed(unit, 200).f_min - 0.5);
  const double e2 = std::abs(assemble_solution(Params(3.0, 2.0, 3.0)).f_min - 8.0 / 13.0);
  t.expect(e1 <= 1e-12, detail::fmt("(1,1,0.5) analytic error %.3g", e1));
  t.expect(o1 <= 1e-3, detail::fmt("(1,1,0.5) oracle error %.3g", o1));
  t.expect(e2 <= 1e-12, detail::fmt("(3,2,3) analytic error %.3g", e2));
  return {2, "degenerate diagonal", t.ok,
          t.ok ? detail::fmt("errors %.3g", std::max({e1, e2})) + detail::fmt(" analytic, %.3g oracle", o1)
               : t.first_failure};
}

inline CheckResult sweep_shape_low() {
  detail::Tally t;
  const std::vector<SweepRow> rows = detail::sweep61(3.0, 2.0);
  t.expect(rows.size() == 61, "sweep rejected grid points");
  if (!t.ok) return {3, "sweep shape h <= a", false, t.first_failure};
  double sym = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) sym = std::max(sym, std::abs(rows[i].f_min - rows[60 - i].f_min));
  t.expect(sym < 1e-6, detail::fmt("symmetry error %.3g", sym));
  const auto it = std::min_element(rows.begin(), rows.end(),
                                   [](const SweepRow& l, const SweepRow& r) { return l.f_min < r.f_min; });
  t.expect(it - rows.begin() == 30, detail::fmt("minimum at L=%g", it->L));
  t.expect(std::abs(rows[30].f_min - 8.0 / 13.0) <= 1e-6, detail::fmt("value at L=3 is %.12g", rows[30].f_min));
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    const double d = rows[i + 1].f_min - rows[i].f_min;
    if (i + 1 <= 30) {
      t.expect(d < -1e-8, detail::fmt("not decreasing after L=%g", rows[i].L));
    } else {
      t.expect(d > 1e-8, detail::fmt("not increasing after L=%g", rows[i].L));
    }
  }
  return {3, "sweep shape h <= a", t.ok, t.ok ? detail::fmt("symmetry %.3g, min 8/13", sym) : t.first_failure};
}

inline CheckResult sweep_shape_high() {
  detail::Tally t;
  const std::vector<SweepRow> rows = detail::sweep61(2.0, 3.0);
  t.expect(rows.size() == 61, "sweep rejected grid points");
  if (!t.ok) return {4, "sweep shape h > a", false, t.first_failure};
  double sym = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) sym = std::max(sym, std::abs(rows[i].f_min - rows[60 - i].f_min));
  t.expect(sym < 1e-6, detail::fmt("symmetry error %.3g", sym));
  double plateau = 0.0;
  std::size_t first = rows.size();
  std::size_t last = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].L < 2.0 || rows[i].L > 4.0) continue;
    first = std::min(first, i);
    last = std::max(last, i);
    plateau = std::max(plateau, std::abs(rows[i].f_min - 2.0));
  }
  t.expect(plateau <= 1e-9, detail::fmt("plateau error %.3g", plateau));
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    const double d = rows[i + 1].f_min - rows[i].f_min;
    if (i + 1 <= first) t.expect(d < -1e-8, detail::fmt("not decreasing after L=%g", rows[i].L));
    if (i >= last) t.expect(d > 1e-8, detail::fmt("not increasing after L=%g", rows[i].L));
  }
  return {4, "sweep shape h > a", t.ok,
          t.ok ? detail::fmt("plateau error %.3g", plateau) + detail::fmt(", symmetry %.3g", sym) : t.first_failure};
}

inline CheckResult hypocycloid_instance() {
  detail::Tally t;
  const Params p(3.0, 2.0, 2.0);
  const OptimalProfile prof = assemble_solution(p);
  const double area_err = std::abs(area_below(prof.curve, p) - 2.0);
  t.expect(area_err <= 1e-6, detail::fmt("area error %.3g", area_err));

  // Slopes along the graph part (the last segment is the vertical tail).
  double worst_turn = 0.0;
  double prev_slope = 0.0;
  bool have_prev = false;
  for (std::size_t i = 0; i + 1 < prof.curve.size(); ++i) {
    const double dx = prof.curve[i + 1].x - prof.curve[i].x;
    if (dx <= 0.0) continue;
    const double s = (prof.curve[i + 1].y - prof.curve[i].y) / dx;
    if (have_prev) worst_turn = std::min(worst_turn, s - prev_slope);
    prev_slope = s;
    have_prev = true;
  }
  t.expect(worst_turn >= -1e-9, detail::fmt("slope decreases by %.3g", -worst_turn));
  t.expect(prof.h_star < 2.0, detail::fmt("h_star = %.12g", prof.h_star));

  OptimalProfile coarse = assemble_solution(p, 2000);
  const double el = el_residual(coarse, p);
  t.expect(el < 1e-6, detail::fmt("EL residual %.3g", el));

  const double psi = psi_big(*prof.xi_star, *prof.eta_star, p);
  const double gap = std::abs(resistance(prof.curve) - psi);
  t.expect(gap <= 1e-8, detail::fmt("|F(curve) - Psi| = %.3g", gap));
  const double oracle = std::abs(minimize_relaxed(p, 400).f_min - prof.f_min);
  t.expect(oracle <= 2e-3, detail::fmt("oracle gap %.3g", oracle));
  return {5, "hypocycloid instance (3,2,2)", t.ok,
          t.ok ? detail::fmt("F - Psi %.3g", gap) + detail::fmt(", EL %.3g", el) + detail::fmt(", oracle %.3g", oracle)
               : t.first_failure};
}

inline CheckResult reflection() {
  detail::Tally t;
  double worst_f = 0.0;
  double worst_v = 0.0;
  for (double L : {2.0, 2.3}) {
    const Params p(3.0, 2.0, L);
    const Params q(3.0, 2.0, 6.0 - L);
    const OptimalProfile s = assemble_solution(p);
    const OptimalProfile r = assemble_solution(q);
    worst_f = std::max(worst_f, std::abs(s.f_min - r.f_min));
    const Polyline mirrored = reflect(s.curve, p);
    t.expect(mirrored.size() == r.curve.size(), detail::fmt("vertex count differs at L=%g", L));
    if (mirrored.size() != r.curve.size()) continue;
    for (std::size_t i = 0; i < mirrored.size(); ++i) {
      worst_v = std::max({worst_v, std::abs(mirrored[i].x - r.curve[i].x), std::abs(mirrored[i].y - r.curve[i].y)});
    }
  }
  t.expect(worst_f <= 1e-8, detail::fmt("f_min mismatch %.3g", worst_f));
  t.expect(worst_v <= 1e-9, detail::fmt("vertex mismatch %.3g", worst_v));
  return {6, "reflection symmetry", t.ok,
          t.ok ? detail::fmt("f gap %.3g", worst_f) + detail::fmt(", vertex gap %.3g", worst_v) : t.first_failure};
}

inline CheckResult sawtooth() {
  detail::Tally t;
  const Params p = sawtooth_params();
  double worst = 0.0;
  for (int n : {4, 8, 16, 64, 256}) {
    const Polyline c = sawtooth_counterexample(n);
    const double err = std::abs(resistance(c) - 1.0 / (2.0 * (n * n + 1.0)));
    worst = std::max(worst, err);
    t.expect(err <= 1e-15, detail::fmt("F error at n=%g", n));
    t.expect(area_below(c, p) == 0.125, detail::fmt("area not 1/8 at n=%g", n));
  }
  const double f = assemble_solution(p).f_min;
  t.expect(f > 0.19, detail::fmt("class A minimum %.12g", f));
  return {7, "sawtooth nonexistence demo", t.ok,
          t.ok ? detail::fmt("F error %.3g", worst) + detail::fmt(", class A minimum %.6g", f) : t.first_failure};
}

inline CheckResult young_floor() {
  detail::Tally t;
  const double a = 2.0;
  const double h = 3.0;
  double lowest = 1e300;
  std::mt19937_64 rng(20240531);
  std::uniform_real_distribution<double> frac(0.01, 0.99);
  std::uniform_int_distribution<int> verts(1, 12);
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const Params p(a, h, frac(rng) * a * h);
    const double f = resistance(random_monotone(p, verts(rng), s));
    lowest = std::min(lowest, f);
    t.expect(f >= 2.0 - 1e-12, detail::fmt("random curve below floor: %.15g", f));
  }
  double worst = 0.0;
  for (double L : {2.2, 3.0, 3.7}) {
    const Params p(a, h, L);
    worst = std::max(worst, std::abs(resistance(gamma_circle(p)) - 2.0));
    for (std::uint64_t s = 0; s < 20; ++s) {
      const Polyline c = nonunique_profile(p, random_nonunique_spec(p, 6, s));
      worst = std::max(worst, std::abs(resistance(c) - 2.0));
    }
  }
  t.expect(worst <= 1e-12, detail::fmt("band curve off floor by %.3g", worst));
  return {8, "Young floor h - a/2", t.ok,
          t.ok ? detail::fmt("lowest random F %.6g", lowest) + detail::fmt(", band deviation %.3g", worst)
               : t.first_failure};
}

inline CheckResult kernel_suite() {
  detail::Tally t;
  for (int i = 0; i <= 6000; ++i) {
    const double z = -2.0 + i * 1e-3;
    t.expect(kernels::g_star(z) <= kernels::g(z), detail::fmt("g** > g at z=%g", z));
  }
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> pick(-2.0, 4.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = pick(rng);
    const double y = pick(rng);
    const double mid = kernels::g_star(0.5 * (x + y));
    t.expect(mid <= 0.5 * (kernels::g_star(x) + kernels::g_star(y)) + 1e-15, "g** midpoint convexity fails");
  }
  const double step = 1e-5;
  double worst_fd = 0.0;
  for (int i = 0; i <= 600; ++i) {
    const double z = -2.0 + i * 0.01 + 0.003;
    auto fd = [&](double (*f)(double)) { return (f(z + step) - f(z - step)) / (2.0 * step); };
    worst_fd = std::max(worst_fd, std::abs(fd(kernels::g) - kernels::g_prime(z)));
    worst_fd = std::max(worst_fd, std::abs(fd(kernels::g_prime) - kernels::g_second(z)));
    worst_fd = std::max(worst_fd, std::abs(fd(kernels::g_star) - kernels::g_star_prime(z)));
    worst_fd = std::max(worst_fd, std::abs(fd(kernels::psi) - kernels::psi_prime(z)));
  }
  t.expect(worst_fd <= 1e-6, detail::fmt("finite-difference error %.3g", worst_fd));
  const Params p(3.0, 2.0, 2.0);
  int negatives = 0;
  for (int i = 0; i < 50; ++i) {
    for (int j = 0; j < 50; ++j) {
      const double eta = (j + 1) / 50.0;
      const double xi = (eta - 1e-3) * i / 49.0;
      if (phi_big(std::min(xi + 1e-3, eta), eta, p) <= phi_big(xi, eta, p)) ++negatives;
    }
  }
  t.expect(negatives == 0, detail::fmt("Phi not increasing in xi at %g grid points", negatives));
  return {9, "kernel suite", t.ok, t.ok ? detail::fmt("max finite-difference error %.3g", worst_fd) : t.first_failure};
}

inline CheckResult rearrangement() {
  detail::Tally t;
  const double h = 2.0;
  double worst_area = 0.0;
  double worst_rise = -1e300;
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> level(0.0, h);
  std::uniform_int_distribution<int> size(8, 80);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = size(rng);
    std::vector<double> v(static_cast<std::size_t>(n) + 1);
    do {
      for (double& y : v) y = level(rng);
      v.front() = 0.0;
      v.back() = h;
    } while (std::is_sorted(v.begin(), v.end()));
    const GridFunction u(3.0, v);
    const GridFunction w = monotone_rearrange(u);
    t.expect(std::is_sorted(w.values.begin(), w.values.end()), "output not monotone");
    worst_area = std::max(worst_area, std::abs(w.area() - u.area()));
    worst_rise = std::max(worst_rise, g_star_energy(w) - g_star_energy(u));
  }
  t.expect(worst_area <= 1e-9, detail::fmt("area drift %.3g", worst_area));
  t.expect(worst_rise <= 1e-12, detail::fmt("energy rise %.3g", worst_rise));
  return {10, "monotone rearrangement", t.ok,
          t.ok ? detail::fmt("area drift %.3g", worst_area) + detail::fmt(", max energy change %.3g", worst_rise)
               : t.first_failure};
}

inline std::vector<std::function<CheckResult()>> all_checks() {
  return {band_value,  degenerate_diagonal, sweep_shape_low, sweep_shape_high, hypocycloid_instance,
          reflection,  sawtooth,            young_floor,     kernel_suite,     rearrangement};
}

/// Runs every check; exceptions count as failures.
inline std::vector<CheckResult> run_all() {
  std::vector<CheckResult> out;
  int id = 1;
  for (const auto& check : all_checks()) {
    try {
      out.push_back(check());
    } catch (const std::exception& e) {
      out.push_back({id, "check " + std::to_string(id), false, std::string("threw: ") + e.what()});
    }
    ++id;
  }
  return out;
}

inline std::string format_table(const std::vector<CheckResult>& results) {
  std::string out;
  char buf[256];
  for (const CheckResult& r : results) {
    std::snprintf(buf, sizeof buf, "[%s] %2d  %-30s  ", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str());
    out += buf + r.detail + "\n";
  }
  return out;
}

}  // namespace euler_profile::verify
