#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <sstream>
#include <vector>

#include "errors.hpp"

namespace euler_profile {

/// Problem triple: half-beam a, height h, prescribed area L under the profile.
struct Params {
  double a;
  double h;
  double L;

  Params(double a_, double h_, double L_) : a(a_), h(h_), L(L_) {
    if (!(std::isfinite(a) && std::isfinite(h) && std::isfinite(L))) {
      throw DomainError("Params: non-finite value");
    }
    if (!(a > 0.0) || !(h > 0.0)) {
      throw DomainError("Params: need a > 0 and h > 0");
    }
    if (!(L > 0.0) || !(L < a * h)) {
      std::ostringstream msg;
      msg << "Params: need 0 < L < a*h = " << a * h << ", got L = " << L;
      throw DomainError(msg.str());
    }
  }

  double box_area() const { return a * h; }
};

struct Point {
  double x;
  double y;

  friend bool operator==(const Point&, const Point&) = default;
};

/// Ordered vertex list of a piecewise affine curve. Parametrization is not
/// stored; every quantity computed from a Polyline is reparametrization
/// invariant. Consecutive vertices must differ.
class Polyline {
public:
  explicit Polyline(std::vector<Point> vertices) : vertices_(std::move(vertices)) {
    if (vertices_.size() < 2) {
      throw InvalidInput("Polyline: need at least two vertices");
    }
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      const Point& p = vertices_[i];
      if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
        throw InvalidInput("Polyline: non-finite vertex " + std::to_string(i));
      }
      if (i > 0 && vertices_[i - 1] == p) {
        throw InvalidInput("Polyline: zero-length segment ending at vertex " + std::to_string(i));
      }
    }
  }

  Polyline(std::initializer_list<Point> pts) : Polyline(std::vector<Point>(pts)) {}

  std::span<const Point> vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  const Point& operator[](std::size_t i) const { return vertices_[i]; }
  const Point& front() const { return vertices_.front(); }
  const Point& back() const { return vertices_.back(); }
  std::size_t segment_count() const { return vertices_.size() - 1; }

private:
  std::vector<Point> vertices_;
};

/// Uniform-grid function on [0, a]: values u_0..u_n at x_i = i·a/n.
struct GridFunction {
  double a = 1.0;
  std::vector<double> values;

  GridFunction() = default;
  GridFunction(double a_, std::vector<double> v) : a(a_), values(std::move(v)) {
    if (!(a > 0.0) || values.size() < 2) {
      throw InvalidInput("GridFunction: need a > 0 and at least one segment");
    }
  }

  std::size_t n() const { return values.size() - 1; }
  double dx() const { return a / static_cast<double>(n()); }
  double x(std::size_t i) const { return a * static_cast<double>(i) / static_cast<double>(n()); }
  double slope(std::size_t i) const { return (values[i + 1] - values[i]) / dx(); }

  /// Trapezoid area ∫₀ᵃ u.
  double area() const {
    double s = 0.5 * (values.front() + values.back());
    for (std::size_t i = 1; i + 1 < values.size(); ++i) s += values[i];
    return s * dx();
  }
};

/// Drops consecutive duplicates so the result satisfies the Polyline invariant.
inline std::vector<Point> dedupe(std::vector<Point> pts) {
  std::vector<Point> out;
  out.reserve(pts.size());
  for (const Point& p : pts) {
    if (out.empty() || !(out.back() == p)) out.push_back(p);
  }
  return out;
}

}  // namespace euler_profile
