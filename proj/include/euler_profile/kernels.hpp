#pragma once

// Slope-energy density g(z) = z₊³/(1+z²), its derivatives, the convex
// envelope g** (affine with slope 1 beyond z = 1) and ψ = g** − id.

namespace euler_profile::kernels {

inline double g(double z) {
  if (z <= 0.0) return 0.0;
  return z * z * z / (1.0 + z * z);
}

/// z²(z²+3)/(1+z²)² on z ≥ 0, zero below.
inline double g_prime(double z) {
  if (z <= 0.0) return 0.0;
  const double z2 = z * z;
  const double d = 1.0 + z2;
  return z2 * (z2 + 3.0) / (d * d);
}

/// 2z(3−z²)/(1+z²)³ on z ≥ 0, zero below.
inline double g_second(double z) {
  if (z <= 0.0) return 0.0;
  const double z2 = z * z;
  const double d = 1.0 + z2;
  return 2.0 * z * (3.0 - z2) / (d * d * d);
}

/// Convex envelope g**. The two branches meet at z = 1 with value 1/2.
inline double g_star(double z) {
  if (z >= 1.0) return z - 0.5;
  return g(z);
}

/// Derivative of g**: g' below 1, constant 1 from there on.
inline double g_star_prime(double z) {
  if (z >= 1.0) return 1.0;
  return g_prime(z);
}

inline double psi(double z) { return g_star(z) - z; }

/// ψ'(z) = (g**)'(z) − 1. Zero for z ≥ 1, −1 for z ≤ 0.
inline double psi_prime(double z) { return g_star_prime(z) - 1.0; }

}  // namespace euler_profile::kernels
