#include "lienard/rhs.hpp"

#include <cmath>

namespace lienard {

Rhs::Rhs(BiPoly poly) : poly_(std::move(poly)), label_(poly_->str()) {}

Rhs::Rhs(std::function<double(Point)> fn, std::string label) : fn_(std::move(fn)), label_(std::move(label)) {}

Point Rhs::gradient(Point p) const {
  if (poly_) {
    const auto [gx, gy] = poly_->gradient(p.x, p.y);
    return {gx, gy};
  }
  const double h = 1e-6 * std::max(1.0, norm(p));
  return {(fn_({p.x + h, p.y}) - fn_({p.x - h, p.y})) / (2 * h),
          (fn_({p.x, p.y + h}) - fn_({p.x, p.y - h})) / (2 * h)};
}

}  // namespace lienard
