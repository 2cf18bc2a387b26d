#include "lienard/flow.hpp"

#include <cmath>
#include <string>

#include "lienard/errors.hpp"

namespace lienard {

void FlowSettings::validate() const {
  if (!(rel_tol > 0) || !(abs_tol > 0)) throw ValidationFailure("flow tolerances must be positive");
  if (!(max_step > 0)) throw ValidationFailure("max_step must be positive");
  if (!(max_time > 0)) throw ValidationFailure("max_time must be positive");
  if (!(escape_box > 0)) throw ValidationFailure("escape_box must be positive");
}

FlowSettings FlowSettings::tightened(double factor) const {
  FlowSettings s = *this;
  s.rel_tol /= factor;
  s.abs_tol /= factor;
  return s;
}

namespace detail {

void check_escape(Point p, const FlowSettings& settings) {
  if (!is_finite(p) || std::abs(p.x) > settings.escape_box || std::abs(p.y) > settings.escape_box) {
    throw Escape("trajectory left the box |x|,|y| <= " + std::to_string(settings.escape_box));
  }
}

}  // namespace detail

namespace {

struct PlanarRhs {
  const LienardField* field;
  void operator()(const ode::State<2>& y, ode::State<2>& dy) const {
    const Point v = field->velocity({y[0], y[1]});
    dy[0] = v.x;
    dy[1] = v.y;
  }
};

struct QuadratureRhs {
  const LienardField* field;
  const ScalarFn* integrand;
  void operator()(const ode::State<3>& y, ode::State<3>& dy) const {
    const Point p{y[0], y[1]};
    const Point v = field->velocity(p);
    dy[0] = v.x;
    dy[1] = v.y;
    dy[2] = (*integrand)(p);
  }
};

}  // namespace

Point flow(const LienardField& field, Point p, double t, const FlowSettings& settings) {
  if (std::abs(t) > settings.max_time) throw ValidationFailure("|t| exceeds max_time");
  if (t == 0.0) return p;
  const LienardField f = t > 0 ? field : field.reversed();
  const double horizon = std::abs(t);
  ode::DormandPrince<2, PlanarRhs> stepper(PlanarRhs{&f}, settings.control());
  stepper.start(0.0, {p.x, p.y});
  while (stepper.t() < horizon) {
    detail::guarded_step(stepper, horizon, settings);
    detail::check_escape({stepper.y()[0], stepper.y()[1]}, settings);
  }
  return {stepper.y()[0], stepper.y()[1]};
}

std::vector<SectionEvent> section_crossings(const LienardField& field, Point p, int count,
                                            const FlowSettings& settings) {
  if (count < 1) throw ValidationFailure("section_crossings needs count >= 1");
  const double dir = field.direction();
  std::vector<SectionEvent> events;
  ode::DormandPrince<2, PlanarRhs> stepper(PlanarRhs{&field}, settings.control());
  stepper.start(0.0, {p.x, p.y});
  auto event = [dir](const ode::State<2>& y) { return dir * y[0]; };
  auto rate = [dir](const ode::State<2>&, const ode::State<2>& dy) { return dir * dy[0]; };
  while (static_cast<int>(events.size()) < count) {
    if (stepper.t() >= settings.max_time) {
      throw NoCrossing("no section crossing within max_time=" + std::to_string(settings.max_time));
    }
    const double before = event(stepper.y());
    detail::guarded_step(stepper, settings.max_time, settings);
    const Point now{stepper.y()[0], stepper.y()[1]};
    detail::check_escape(now, settings);
    if (norm(now) < settings.origin_radius) throw NoCrossing("trajectory converged to the origin");
    const double after = event(stepper.y());
    if (before < 0.0 && after >= 0.0) {
      const auto [tc, yc] = ode::locate_event(stepper, event, rate);
      if (yc[1] > 0.0) {
        events.push_back({tc, {yc[0], yc[1]}, static_cast<int>(events.size()) + 1});
      }
    }
  }
  return events;
}

QuadratureResult flow_with_quadrature(const LienardField& field, Point p, const ScalarFn& integrand, double t,
                                      const FlowSettings& settings) {
  if (std::abs(t) > settings.max_time) throw ValidationFailure("|t| exceeds max_time");
  if (t == 0.0) return {p, 0.0};
  const LienardField f = t > 0 ? field : field.reversed();
  const double horizon = std::abs(t);
  ode::DormandPrince<3, QuadratureRhs> stepper(QuadratureRhs{&f, &integrand}, settings.control());
  stepper.start(0.0, {p.x, p.y, 0.0});
  while (stepper.t() < horizon) {
    detail::guarded_step(stepper, horizon, settings);
    detail::check_escape({stepper.y()[0], stepper.y()[1]}, settings);
  }
  const auto& y = stepper.y();
  return {{y[0], y[1]}, t > 0 ? y[2] : -y[2]};
}

std::vector<Point> flow_samples(const LienardField& field, Point p, const std::vector<double>& times,
                                const FlowSettings& settings) {
  std::vector<Point> out;
  out.reserve(times.size());
  ode::DormandPrince<2, PlanarRhs> stepper(PlanarRhs{&field}, settings.control());
  stepper.start(0.0, {p.x, p.y});
  for (double t : times) {
    if (t < stepper.t()) throw ValidationFailure("flow_samples needs non-decreasing times");
    while (stepper.t() < t) {
      detail::guarded_step(stepper, t, settings);
      detail::check_escape({stepper.y()[0], stepper.y()[1]}, settings);
    }
    out.push_back({stepper.y()[0], stepper.y()[1]});
  }
  return out;
}

}  // namespace lienard
