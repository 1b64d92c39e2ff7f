#pragma once

#include <algorithm>
#include <cmath>
#include <string_view>

#include "errors.hpp"
#include "types.hpp"

namespace euler_profile {

/// Partition of {a>0, h>0, 0<L<ah} by the position of 2L relative to
/// (ah)∧a² and (ah)∨(2ah−a²).
enum class Regime {
  UniqueConvex,               // 2L < (ah)∧a²
  DegenerateAffine,           // 2L = (ah)∧a²
  NonuniqueBand,              // h > a, a² < 2L < 2ah−a²
  DegenerateAffineReflected,  // 2L = (ah)∨(2ah−a²), h > a
  UniqueConcaveReflected,     // 2L > (ah)∨(2ah−a²)
};

inline std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::UniqueConvex: return "UNIQUE_CONVEX";
    case Regime::DegenerateAffine: return "DEGENERATE_AFFINE";
    case Regime::NonuniqueBand: return "NONUNIQUE_BAND";
    case Regime::DegenerateAffineReflected: return "DEGENERATE_AFFINE_REFLECTED";
    case Regime::UniqueConcaveReflected: return "UNIQUE_CONCAVE_REFLECTED";
  }
  return "UNKNOWN";
}

/// Relative guard inside which 2L counts as sitting on a regime boundary.
inline constexpr double kRegimeGuard = 1e-12;

inline bool near_boundary(double two_l, double boundary) {
  return std::abs(two_l - boundary) <= kRegimeGuard * std::max(1.0, std::abs(boundary));
}

/// For h ≤ a both boundaries coincide at ah and the band is empty; the
/// boundary point is then tagged DegenerateAffine.
inline Regime classify(const Params& p) {
  const double two_l = 2.0 * p.L;
  const double ah = p.a * p.h;
  const double a2 = p.a * p.a;
  const double lower = std::min(ah, a2);
  const double upper = std::max(ah, 2.0 * ah - a2);
  if (near_boundary(two_l, lower)) return Regime::DegenerateAffine;
  if (two_l < lower) return Regime::UniqueConvex;
  if (near_boundary(two_l, upper)) return Regime::DegenerateAffineReflected;
  if (two_l > upper) return Regime::UniqueConcaveReflected;
  return Regime::NonuniqueBand;
}

inline bool is_reflected(Regime r) {
  return r == Regime::DegenerateAffineReflected || r == Regime::UniqueConcaveReflected;
}

}  // namespace euler_profile
