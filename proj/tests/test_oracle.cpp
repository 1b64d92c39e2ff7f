#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "euler_profile/oracle.hpp"
#include "euler_profile/solver.hpp"

namespace ep = euler_profile;
namespace k = euler_profile::kernels;

namespace {

ep::GridFunction linear(double a, double top, int n) {
  std::vector<double> v(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) v[static_cast<std::size_t>(i)] = top * i / n;
  return ep::GridFunction(a, v);
}

}  // namespace

TEST(RelaxedEnergy, Examples) {
  const ep::Params p(3, 2, 3);
  EXPECT_NEAR(ep::relaxed_energy(linear(3, 2, 30), p), 8.0 / 13.0, 1e-14);
  EXPECT_DOUBLE_EQ(ep::relaxed_energy(ep::GridFunction(3, std::vector<double>(11, 0.0)), p), 2.0);
  const ep::Params tall(1, 2, 1);
  EXPECT_DOUBLE_EQ(ep::relaxed_energy(linear(1, 1, 10), tall), 1.5);
}

TEST(RelaxedEnergy, RejectsNonMonotone) {
  const ep::Params p(3, 2, 2);
  EXPECT_THROW(ep::relaxed_energy(ep::GridFunction(3, {0.0, 1.0, 0.5, 2.0}), p), ep::DomainError);
}

TEST(RelaxedEnergy, ConvexAlongSegments) {
  const ep::Params p(3, 2, 2);
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    const ep::GridFunction u = ep::to_graph(ep::random_monotone(p, 6, rng()), 40);
    const ep::GridFunction w = ep::to_graph(ep::random_monotone(p, 6, rng()), 40);
    std::vector<double> mid(u.values.size());
    for (std::size_t i = 0; i < mid.size(); ++i) mid[i] = 0.5 * (u.values[i] + w.values[i]);
    const double lhs = ep::relaxed_energy(ep::GridFunction(3, mid), p);
    const double rhs = 0.5 * (ep::relaxed_energy(u, p) + ep::relaxed_energy(w, p));
    EXPECT_LE(lhs, rhs + 1e-12);
  }
}

TEST(RelaxedEnergy, RearrangementNeverIncreases) {
  const ep::Params p(3, 2, 2);
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> v(41);
    for (std::size_t i = 1; i + 1 < v.size(); ++i) v[i] = 2.0 * unit(rng);
    v.front() = 0.0;
    v.back() = 2.0;
    const ep::GridFunction u(3, v);
    const ep::GridFunction r = ep::monotone_rearrange(u);
    EXPECT_LE(ep::relaxed_energy(r, p), p.h + ep::g_star_energy(u) - (u.values.back() - u.values.front()) + 1e-12);
  }
}

TEST(MinimizeRelaxed, Converges) {
  const ep::Params p(3, 2, 2);
  const ep::OracleResult r = ep::minimize_relaxed(p, 200);
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.area_error, 1e-9);
  EXPECT_EQ(r.u.n(), 200u);
  for (std::size_t i = 0; i + 1 < r.u.values.size(); ++i) EXPECT_LE(r.u.values[i], r.u.values[i + 1]);
  EXPECT_GE(r.u.values.front(), 0.0);
  EXPECT_LE(r.u.values.back(), 2.0);
  EXPECT_NEAR(r.f_min, ep::relaxed_energy(r.u, p), 1e-12);
}

TEST(MinimizeRelaxed, MatchesClosedFormCases) {
  // Diagonal: the straight line is optimal and lies on every grid.
  const ep::OracleResult d = ep::minimize_relaxed(ep::Params(3, 2, 3), 64);
  EXPECT_NEAR(d.f_min, 8.0 / 13.0, 1e-8);
  // Band: the floor h − a/2.
  const ep::OracleResult b = ep::minimize_relaxed(ep::Params(1, 2, 1.25), 64);
  EXPECT_NEAR(b.f_min, 1.5, 1e-8);
}

TEST(MinimizeRelaxed, RejectsSmallGrid) {
  EXPECT_THROW(ep::minimize_relaxed(ep::Params(3, 2, 2), 15), ep::InvalidInput);
  EXPECT_THROW(ep::minimize_relaxed(ep::Params(3, 2, 2), 64, 0.0), ep::InvalidInput);
}

TEST(MinimizeRelaxed, Deterministic) {
  const ep::Params p(2, 3, 1);
  const ep::OracleResult a = ep::minimize_relaxed(p, 100);
  const ep::OracleResult b = ep::minimize_relaxed(p, 100);
  EXPECT_EQ(a.f_min, b.f_min);
  EXPECT_EQ(a.u.values, b.u.values);
  EXPECT_EQ(a.iterations, b.iterations);
}

TEST(MinimizeRelaxed, NestedGridsRefine) {
  // A function on the coarse grid is also admissible on the doubled grid,
  // so the minimum cannot go up.
  for (const ep::Params& p : {ep::Params(3, 2, 2), ep::Params(3, 2, 0.5), ep::Params(2, 3, 4.5)}) {
    double prev = 1e300;
    for (int n : {50, 100, 200}) {
      const double f = ep::minimize_relaxed(p, n).f_min;
      EXPECT_LE(f, prev + 1e-8) << p.L << " n=" << n;
      prev = f;
    }
  }
}

TEST(MinimizeRelaxed, EulerLagrangeAffineAtSolution) {
  // ψ'(u') = λx + μ wherever 0 < u' < 1; the discrete solution satisfies
  // it up to discretization error.
  const ep::Params p(3, 2, 2);
  const int n = 400;
  const ep::OracleResult r = ep::minimize_relaxed(p, n);
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = 0; i < r.u.n(); ++i) {
    const double s = r.u.slope(i);
    if (s <= 0.05 || s >= 0.95) continue;
    xs.push_back(r.u.x(i) + 0.5 * r.u.dx());
    ys.push_back(k::psi_prime(s));
  }
  ASSERT_GT(xs.size(), 50u);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double lambda = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  const double mu = (sy - lambda * sx) / m;
  double worst = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) worst = std::max(worst, std::abs(ys[i] - lambda * xs[i] - mu));
  EXPECT_LT(worst, 10.0 / n);
  EXPECT_GT(lambda, 0.0);
}

TEST(Anneal, ApproachesOptimum) {
  for (const ep::Params& p : {ep::Params(3, 2, 2), ep::Params(1, 2, 1.25)}) {
    const ep::AnnealResult r = ep::anneal_original(p, 200000, 7);
    const double f = ep::solve_fmin(p);
    EXPECT_LE(r.f, 1.05 * f) << p.a << " " << p.h << " " << p.L;
    EXPECT_GE(r.f, ep::minimize_relaxed(p, 200).f_min - 1e-9);
    EXPECT_NEAR(ep::resistance(r.curve), r.f, 1e-12);
    EXPECT_TRUE(ep::check_admissible(r.curve, p, 1e-9).in_class_a());
  }
}

TEST(Anneal, DeterministicAndValidatesBudget) {
  const ep::Params p(3, 2, 2);
  const ep::AnnealResult a = ep::anneal_original(p, 5000, 3);
  const ep::AnnealResult b = ep::anneal_original(p, 5000, 3);
  EXPECT_EQ(a.f, b.f);
  EXPECT_TRUE(std::equal(a.curve.vertices().begin(), a.curve.vertices().end(), b.curve.vertices().begin(),
                         b.curve.vertices().end()));
  EXPECT_THROW(ep::anneal_original(p, 0, 3), ep::InvalidInput);
}
