#pragma once

#include <functional>
#include <optional>
#include <string>

#include "lienard/field.hpp"
#include "lienard/poly.hpp"

namespace lienard {

/// Right-hand side f of L.g = f: either an exact polynomial or an opaque
/// scalar function of a point.
class Rhs {
 public:
  Rhs() : Rhs(BiPoly{}) {}
  explicit Rhs(BiPoly poly);
  Rhs(std::function<double(Point)> fn, std::string label);

  static Rhs zero() { return Rhs(BiPoly{}); }
  static Rhs constant(Rational c) { return Rhs(BiPoly::constant(std::move(c))); }

  double operator()(Point p) const { return poly_ ? poly_->eval(p.x, p.y) : fn_(p); }
  /// Gradient; central differences for opaque functions.
  Point gradient(Point p) const;

  const std::optional<BiPoly>& poly() const { return poly_; }
  const std::string& label() const { return label_; }

 private:
  std::optional<BiPoly> poly_;
  std::function<double(Point)> fn_;
  std::string label_;
};

}  // namespace lienard
