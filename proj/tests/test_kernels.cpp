#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "euler_profile/kernels.hpp"
#include "euler_profile/numerics.hpp"
#include "euler_profile/regime.hpp"

namespace ep = euler_profile;
namespace k = euler_profile::kernels;

namespace {

double central(double (*f)(double), double z, double step = 1e-5) {
  return (f(z + step) - f(z - step)) / (2.0 * step);
}

}  // namespace

TEST(Kernels, HandValues) {
  EXPECT_DOUBLE_EQ(k::g(1.0), 0.5);
  EXPECT_DOUBLE_EQ(k::g(2.0), 1.6);
  EXPECT_DOUBLE_EQ(k::g(0.5), 0.1);
  EXPECT_EQ(k::g(-1.0), 0.0);
  EXPECT_DOUBLE_EQ(k::g_prime(1.0), 1.0);
  EXPECT_DOUBLE_EQ(k::g_second(1.0), 0.5);
  EXPECT_NEAR(k::g_second(std::sqrt(3.0)), 0.0, 1e-15);
  // ψ(2/3) = 8/39 − 2/3 = −6/13.
  EXPECT_NEAR(k::psi(2.0 / 3.0), -6.0 / 13.0, 1e-15);
}

TEST(Kernels, EnvelopeIsAffineBeyondOne) {
  for (double z : {1.0, 1.5, 3.0, 10.0}) {
    EXPECT_DOUBLE_EQ(k::g_star(z), z - 0.5);
    EXPECT_DOUBLE_EQ(k::psi(z), -0.5);
    EXPECT_EQ(k::psi_prime(z), 0.0);
  }
  EXPECT_NEAR(k::g_star(1.0 - 1e-9), 0.5, 1e-8);
}

TEST(Kernels, EnvelopeBelowG) {
  for (int i = 0; i <= 6000; ++i) {
    const double z = -2.0 + i * 1e-3;
    ASSERT_LE(k::g_star(z), k::g(z)) << "z=" << z;
  }
}

TEST(Kernels, EnvelopeMidpointConvex) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> pick(-2.0, 4.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = pick(rng);
    const double y = pick(rng);
    ASSERT_LE(k::g_star(0.5 * (x + y)), 0.5 * (k::g_star(x) + k::g_star(y)) + 1e-15);
  }
}

TEST(Kernels, DerivativesMatchFiniteDifferences) {
  for (int i = 0; i <= 600; ++i) {
    const double z = -2.0 + i * 0.01 + 0.0037;
    EXPECT_NEAR(central(k::g, z), k::g_prime(z), 1e-6) << z;
    EXPECT_NEAR(central(k::g_prime, z), k::g_second(z), 1e-6) << z;
    EXPECT_NEAR(central(k::g_star, z), k::g_star_prime(z), 1e-6) << z;
    EXPECT_NEAR(central(k::psi, z), k::psi_prime(z), 1e-6) << z;
  }
}

TEST(Kernels, SecondDerivativeBoundUsedByOracleStep) {
  // The oracle's step assumes ψ'' ≤ 6 on [0, 1].
  double peak = 0.0;
  for (int i = 0; i <= 10000; ++i) peak = std::max(peak, k::g_second(i * 1e-4));
  EXPECT_LT(peak, 6.0);
  EXPECT_GT(peak, 1.0);
}

TEST(Numerics, SimpsonIntegratesSmoothFunctions) {
  EXPECT_NEAR(ep::numerics::adaptive_simpson([](double x) { return std::sin(x); }, 0.0, 1.0), 1.0 - std::cos(1.0),
              1e-11);
  EXPECT_NEAR(ep::numerics::adaptive_simpson([](double x) { return std::exp(x); }, -1.0, 2.0),
              std::exp(2.0) - std::exp(-1.0), 1e-10);
  EXPECT_DOUBLE_EQ(ep::numerics::adaptive_simpson([](double x) { return x * x * x; }, 0.0, 2.0), 4.0);
  EXPECT_EQ(ep::numerics::adaptive_simpson([](double x) { return x; }, 1.0, 1.0), 0.0);
}

TEST(Numerics, BisectionFindsRoot) {
  const double r = ep::numerics::bisect_increasing([](double x) { return x * x; }, 2.0, 0.0, 2.0);
  EXPECT_NEAR(r, std::sqrt(2.0), 1e-12);
}

TEST(Numerics, GoldenSectionOnParabola) {
  const auto m = ep::numerics::golden_section([](double x) { return (x - 0.3) * (x - 0.3) + 1.0; }, 0.0, 1.0);
  // Near a quadratic minimum x is only resolved to about sqrt(eps).
  EXPECT_NEAR(m.x, 0.3, 1e-7);
  EXPECT_NEAR(m.value, 1.0, 1e-15);
}

TEST(Numerics, ScanFindsGlobalOfBimodal) {
  // Local minimum near 0.2 (value 0.1), global near 0.8 (value 0).
  auto f = [](double x) { return std::min((x - 0.2) * (x - 0.2) + 0.1, 5.0 * (x - 0.8) * (x - 0.8)); };
  const auto m = ep::numerics::scan_then_golden(f, 0.0, 1.0);
  EXPECT_NEAR(m.x, 0.8, 1e-8);
}

TEST(Numerics, ScanKeepsBoundaryMinimum) {
  const auto m = ep::numerics::scan_then_golden([](double x) { return x; }, 0.25, 1.0);
  EXPECT_EQ(m.x, 0.25);
}

TEST(Regime, Examples) {
  using ep::Regime;
  EXPECT_EQ(ep::classify(ep::Params(1, 2, 1.25)), Regime::NonuniqueBand);
  EXPECT_EQ(ep::classify(ep::Params(3, 2, 3)), Regime::DegenerateAffine);
  EXPECT_EQ(ep::classify(ep::Params(1, 1, 0.5)), Regime::DegenerateAffine);
  EXPECT_EQ(ep::classify(ep::Params(3, 2, 2)), Regime::UniqueConvex);
  EXPECT_EQ(ep::classify(ep::Params(3, 2, 4)), Regime::UniqueConcaveReflected);
  EXPECT_EQ(ep::classify(ep::Params(2, 3, 2)), Regime::DegenerateAffine);           // 2L = a²
  EXPECT_EQ(ep::classify(ep::Params(2, 3, 4)), Regime::DegenerateAffineReflected);  // 2L = 2ah − a²
  EXPECT_EQ(ep::classify(ep::Params(2, 3, 5)), Regime::UniqueConcaveReflected);
  EXPECT_EQ(ep::to_string(Regime::NonuniqueBand), "NONUNIQUE_BAND");
}

TEST(Regime, GuardSnapsNearBoundary) {
  EXPECT_EQ(ep::classify(ep::Params(3, 2, 3.0 * (1.0 + 1e-14))), ep::Regime::DegenerateAffine);
  EXPECT_EQ(ep::classify(ep::Params(3, 2, 3.0 * (1.0 - 1e-9))), ep::Regime::UniqueConvex);
}

TEST(Regime, BandOnlyWhenTallerThanWide) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> side(0.1, 5.0);
  std::uniform_real_distribution<double> frac(0.001, 0.999);
  for (int i = 0; i < 5000; ++i) {
    const double a = side(rng);
    const double h = side(rng);
    const ep::Params p(a, h, frac(rng) * a * h);
    const ep::Regime r = ep::classify(p);
    if (h <= a) {
      EXPECT_NE(r, ep::Regime::NonuniqueBand);
      EXPECT_NE(r, ep::Regime::DegenerateAffineReflected);
    }
    // Mirror symmetry of the partition.
    const ep::Regime m = ep::classify(ep::Params(a, h, a * h - p.L));
    if (r == ep::Regime::UniqueConvex) {
      EXPECT_EQ(m, ep::Regime::UniqueConcaveReflected);
    }
    if (r == ep::Regime::NonuniqueBand) {
      EXPECT_EQ(m, ep::Regime::NonuniqueBand);
    }
  }
}

TEST(Params, RejectsInvalid) {
  EXPECT_THROW(ep::Params(0, 1, 0.5), ep::DomainError);
  EXPECT_THROW(ep::Params(1, -1, 0.5), ep::DomainError);
  EXPECT_THROW(ep::Params(1, 1, 0.0), ep::DomainError);
  EXPECT_THROW(ep::Params(1, 1, 1.0), ep::DomainError);
  EXPECT_THROW(ep::Params(1, 1, std::nan("")), ep::DomainError);
}
