#include "lienard/field.hpp"

#include <algorithm>
#include <cmath>

namespace lienard {

double norm(Point p) { return std::hypot(p.x, p.y); }
double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
bool is_finite(Point p) { return std::isfinite(p.x) && std::isfinite(p.y); }

std::string PathwayDiagnosis::describe() const {
  std::string out;
  auto add = [&out](const char* msg) {
    if (!out.empty()) out += ", ";
    out += msg;
  };
  if (!odd_degree) add("degree of F is not odd");
  if (!nonzero_slope_at_origin) add("F'(0) = 0");
  if (!vanishes_at_origin) add("F(0) != 0");
  return out;
}

LienardField::LienardField(UniPoly F) : F_(std::move(F)), dF_(F_.derivative()) {}

LienardField LienardField::reversed() const {
  LienardField r = *this;
  r.direction_ = -direction_;
  return r;
}

PathwayDiagnosis LienardField::validate() const {
  PathwayDiagnosis d;
  d.odd_degree = F_.degree() >= 1 && F_.degree() % 2 == 1;
  d.nonzero_slope_at_origin = !F_.coefficient(1).is_zero();
  d.vanishes_at_origin = F_.coefficient(0).is_zero();
  return d;
}

PolyVectorField PolyVectorField::from(const LienardField& field) {
  const Rational s(field.direction());
  PolyVectorField v;
  v.P = s * (BiPoly::y() - BiPoly::from_x(field.F()));
  v.Q = s * (Rational(-1) * BiPoly::x());
  return v;
}

int PolyVectorField::degree() const { return std::max(P.total_degree(), Q.total_degree()); }

BiPoly lie_derivative_poly(const PolyVectorField& field, const BiPoly& f) {
  return field.P * f.dx() + field.Q * f.dy();
}

BiPoly lie_derivative_poly(const LienardField& field, const BiPoly& f) {
  return lie_derivative_poly(PolyVectorField::from(field), f);
}

}  // namespace lienard
