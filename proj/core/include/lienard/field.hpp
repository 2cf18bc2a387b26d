#pragma once

#include <string>
#include <vector>

#include "lienard/poly.hpp"

namespace lienard {

/// A point (or a velocity) in the plane, floating point.
struct Point {
  double x = 0.0;
  double y = 0.0;

  friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
  friend bool operator==(const Point&, const Point&) = default;
};

double norm(Point p);
double dot(Point a, Point b);
bool is_finite(Point p);

/// Why a field does or does not qualify for the hyperbolic-cycle pathway:
/// odd degree, F'(0) != 0 and F(0) = 0, which makes the origin the only
/// singular point.
struct PathwayDiagnosis {
  bool odd_degree = false;
  bool nonzero_slope_at_origin = false;
  bool vanishes_at_origin = false;

  bool ok() const { return odd_degree && nonzero_slope_at_origin && vanishes_at_origin; }
  /// Comma-separated list of failed conditions; empty when ok().
  std::string describe() const;
};

/// The Lienard field  x' = y - F(x),  y' = -x.
///
/// `reversed()` yields the same field with time running backwards (every
/// velocity negated). F is stored as given; validity for the cycle pathway is
/// a separate query so even F (the center case) shares the type.
class LienardField {
 public:
  explicit LienardField(UniPoly F);

  const UniPoly& F() const { return F_; }
  const UniPoly& dF() const { return dF_; }
  /// +1 for forward time, -1 for the time-reversed field.
  int direction() const { return direction_; }
  LienardField reversed() const;

  Point velocity(Point p) const {
    const double s = direction_;
    return {s * (p.y - F_.eval(p.x)), -s * p.x};
  }
  double divergence(Point p) const { return -direction_ * dF_.eval(p.x); }

  PathwayDiagnosis validate() const;

 private:
  UniPoly F_;
  UniPoly dF_;
  int direction_ = 1;
};

/// eval_field: (y - F(x), -x) at p, F by Horner on float coefficients.
inline Point eval_field(const LienardField& field, Point p) { return field.velocity(p); }
/// -F'(x) for the forward field.
inline double divergence(const LienardField& field, Point p) { return field.divergence(p); }

/// Exact derivative of f along the field: (y - F(x)) f_x - x f_y.
BiPoly lie_derivative_poly(const LienardField& field, const BiPoly& f);

/// General polynomial field (P, Q); only the exact operator machinery
/// accepts it.
struct PolyVectorField {
  BiPoly P;
  BiPoly Q;

  static PolyVectorField from(const LienardField& field);
  int degree() const;
};

BiPoly lie_derivative_poly(const PolyVectorField& field, const BiPoly& f);

}  // namespace lienard
