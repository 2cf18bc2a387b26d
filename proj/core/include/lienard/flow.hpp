#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "lienard/errors.hpp"
#include "lienard/field.hpp"
#include "lienard/ode.hpp"

namespace lienard {

struct FlowSettings {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = 0.5;
  double max_time = 1e4;
  /// Trajectories leaving |x|, |y| <= escape_box abort with Escape.
  double escape_box = 1e6;
  /// Below this distance from the origin a trajectory counts as having
  /// converged to the singular point.
  double origin_radius = 1e-14;

  /// Throws ValidationFailure on non-positive values.
  void validate() const;
  /// Both tolerances divided by `factor`.
  FlowSettings tightened(double factor) const;
  ode::StepControl control() const { return {rel_tol, abs_tol, max_step}; }
};

/// A transverse crossing of the canonical section {x = 0, y > 0}.
struct SectionEvent {
  double time = 0.0;
  Point point;
  int crossing_index = 0;
};

using ScalarFn = std::function<double(Point)>;

struct QuadratureResult {
  Point end;
  double integral = 0.0;
};

/// phi_t(p). Negative t integrates the reversed field for |t|.
Point flow(const LienardField& field, Point p, double t, const FlowSettings& settings);

/// First `count` strictly-forward crossings of the positive y-axis in the
/// direction of the flow, each localized to |x| < 1e-12 on the dense output
/// and polished with one Newton step. Throws NoCrossing if max_time elapses
/// (or the orbit collapses onto the origin) first, Escape on blow-up.
std::vector<SectionEvent> section_crossings(const LienardField& field, Point p, int count,
                                            const FlowSettings& settings);

/// (phi_t(p), integral_0^t integrand(phi_s(p)) ds); the quadrature rides as
/// a third state component under the same step controller.
QuadratureResult flow_with_quadrature(const LienardField& field, Point p, const ScalarFn& integrand, double t,
                                      const FlowSettings& settings);

/// Samples phi_{t_k}(p) at the given non-decreasing non-negative times.
std::vector<Point> flow_samples(const LienardField& field, Point p, const std::vector<double>& times,
                                const FlowSettings& settings);

namespace detail {
/// Throws Escape when p is outside the settings' escape box (or not finite).
void check_escape(Point p, const FlowSettings& settings);

/// Advances the stepper; a step-size underflow with the state far outside
/// the region of interest is a finite-time blow-up and becomes Escape.
template <class Stepper>
void guarded_step(Stepper& stepper, double t_limit, const FlowSettings& settings) {
  try {
    stepper.step(t_limit);
  } catch (const StepFailure&) {
    double size = 0.0;
    for (double v : stepper.y()) size = std::max(size, std::abs(v));
    if (size > std::sqrt(settings.escape_box)) throw Escape("finite-time blow-up: " + std::to_string(size));
    throw;
  }
}
}  // namespace detail

}  // namespace lienard
