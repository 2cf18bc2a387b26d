#include "lienard/center.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "lienard/cycles.hpp"
#include "lienard/errors.hpp"
#include "lienard/parallel.hpp"

namespace lienard {

CenterDecomposition decompose_even(const UniPoly& F) {
  const auto& c = F.coefficients();
  std::vector<Rational> k;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i % 2 == 1) {
      if (!c[i].is_zero()) throw NotEven("coefficient of x^" + std::to_string(i) + " is nonzero");
    } else {
      k.push_back(c[i]);
    }
  }
  UniPoly K(std::move(k));
  return {K, K};
}

namespace {

using Vec2Fn = std::function<Point(Point)>;

struct PlanarRhs {
  const Vec2Fn* velocity;
  void operator()(const ode::State<2>& y, ode::State<2>& dy) const {
    const Point v = (*velocity)({y[0], y[1]});
    dy = {v.x, v.y};
  }
};

// Forward crossings (either sign change) of event(p) = 0; a start point
// with |event| <= zero_tol counts as the first one.
std::vector<Point> event_crossings(const Vec2Fn& velocity, Point p, const std::function<double(Point)>& event,
                                   const std::function<Point(Point)>& gradient, int count, double zero_tol,
                                   const FlowSettings& settings) {
  std::vector<Point> out;
  bool skip_first_step = false;
  if (std::abs(event(p)) <= zero_tol) {
    out.push_back(p);
    skip_first_step = true;
  }
  if (static_cast<int>(out.size()) >= count) return out;
  ode::DormandPrince<2, PlanarRhs> stepper(PlanarRhs{&velocity}, settings.control());
  stepper.start(0.0, {p.x, p.y});
  auto ev = [&](const ode::State<2>& y) { return event({y[0], y[1]}); };
  auto rate = [&](const ode::State<2>& y, const ode::State<2>& dy) {
    const Point g = gradient({y[0], y[1]});
    return g.x * dy[0] + g.y * dy[1];
  };
  while (static_cast<int>(out.size()) < count) {
    if (stepper.t() >= settings.max_time) throw NoCrossing("no crossing of the curve within max_time");
    const double before = ev(stepper.y());
    detail::guarded_step(stepper, settings.max_time, settings);
    detail::check_escape({stepper.y()[0], stepper.y()[1]}, settings);
    const double after = ev(stepper.y());
    // The sign change right after a zero-time start is that same crossing.
    if (skip_first_step) {
      skip_first_step = false;
      continue;
    }
    if (before == 0.0 || (before < 0.0) == (after < 0.0)) {
      if (after == 0.0) out.push_back({stepper.y()[0], stepper.y()[1]});
      continue;
    }
    const auto [tc, yc] = ode::locate_event(stepper, ev, rate);
    out.push_back({yc[0], yc[1]});
  }
  return out;
}

}  // namespace

ParabolaCrossings parabola_crossings(const LienardField& field, Point p, const FlowSettings& settings) {
  if (p.x == 0.0 && p.y == 0.0) throw ValidationFailure("the origin lies on every level set");
  const Vec2Fn velocity = [&field](Point q) { return field.velocity(q); };
  const auto event = [](Point q) { return q.y + q.x * q.x; };
  const auto gradient = [](Point q) { return Point{2.0 * q.x, 1.0}; };
  const double zero_tol = 1e-14 * std::max(1.0, dot(p, p));
  const auto hits = event_crossings(velocity, p, event, gradient, 2, zero_tol, settings);
  ParabolaCrossings out;
  out.first = hits[0];
  out.second = hits[1];
  out.first_value = hits[0].x * hits[0].x;
  out.second_value = hits[1].x * hits[1].x;
  return out;
}

double first_integral_parabola(const LienardField& field, Point p, const FlowSettings& settings) {
  if (p.x == 0.0 && p.y == 0.0) throw ValidationFailure("the origin lies on every level set");
  const Vec2Fn velocity = [&field](Point q) { return field.velocity(q); };
  const auto event = [](Point q) { return q.y + q.x * q.x; };
  const auto gradient = [](Point q) { return Point{2.0 * q.x, 1.0}; };
  const double zero_tol = 1e-14 * std::max(1.0, dot(p, p));
  const Point hit = event_crossings(velocity, p, event, gradient, 1, zero_tol, settings).front();
  return hit.x * hit.x;
}

double first_integral_transformed(const CenterDecomposition& decomp, Point p, const FlowSettings& settings) {
  const Point start{p.x * p.x, p.y};
  const double sign = start.y - start.x >= 0.0 ? 1.0 : -1.0;
  const UniPoly& K = decomp.k;
  const Vec2Fn velocity = [&K, sign](Point q) { return Point{sign * 2.0 * (q.y - K.eval(q.x)), -sign}; };
  const auto event = [](Point q) { return q.y - q.x; };
  const auto gradient = [](Point) { return Point{-1.0, 1.0}; };
  const double zero_tol = 1e-14 * std::max(1.0, norm(start));
  return event_crossings(velocity, start, event, gradient, 1, zero_tol, settings).front().x;
}

namespace {

double spread(const std::vector<double>& values) {
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  return (*hi - *lo) / std::max(std::abs(mean), std::numeric_limits<double>::min());
}

bool strictly_monotone(const std::vector<double>& v) {
  bool up = true;
  bool down = true;
  for (std::size_t k = 1; k < v.size(); ++k) {
    up = up && v[k] > v[k - 1];
    down = down && v[k] < v[k - 1];
  }
  return up || down;
}

}  // namespace

CenterReport verify_center(const LienardField& field, const CenterOptions& options, const FlowSettings& settings) {
  if (options.orbit_count < 1 || options.samples_per_orbit < 1) throw ValidationFailure("orbit counts must be positive");
  CenterReport report;
  report.tolerance = options.tolerance;
  const auto n = static_cast<std::size_t>(options.orbit_count);
  report.orbits.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    report.orbits[k].s =
        n == 1 ? options.s_min : options.s_min + (options.s_max - options.s_min) * static_cast<double>(k) / (n - 1.0);
  }

  parallel_for(n, options.threads, [&](std::size_t k) {
    CenterOrbit& o = report.orbits[k];
    const ReturnResult r = return_map(field, o.s, settings);
    o.displacement = std::abs(r.next - o.s);
    o.period = r.return_time;
  });
  std::size_t worst = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (report.orbits[k].displacement > report.orbits[worst].displacement) worst = k;
  }
  report.max_displacement = report.orbits[worst].displacement;
  if (!(report.max_displacement < options.tolerance)) {
    std::ostringstream msg;
    msg.precision(6);
    msg << "orbit through (0, " << report.orbits[worst].s << ") does not close: |R(s) - s| = "
        << report.max_displacement;
    throw CenterViolation(msg.str());
  }

  const CenterDecomposition decomp = decompose_even(field.F());
  parallel_for(n, options.threads, [&](std::size_t k) {
    CenterOrbit& o = report.orbits[k];
    std::vector<double> times(static_cast<std::size_t>(options.samples_per_orbit));
    for (std::size_t j = 0; j < times.size(); ++j) times[j] = o.period * static_cast<double>(j) / times.size();
    const auto points = flow_samples(field, {0.0, o.s}, times, settings);
    std::vector<double> par;
    std::vector<double> tra;
    for (const Point& q : points) {
      par.push_back(first_integral_parabola(field, q, settings));
      tra.push_back(first_integral_transformed(decomp, q, settings));
    }
    o.parabola = par.front();
    o.transformed = tra.front();
    o.parabola_spread = spread(par);
    o.transformed_spread = spread(tra);
    const ParabolaCrossings both = parabola_crossings(field, {0.0, o.s}, settings);
    o.crossing_gap = std::abs(both.first_value - both.second_value);
  });
  std::vector<double> par;
  std::vector<double> tra;
  for (const auto& o : report.orbits) {
    report.max_parabola_spread = std::max(report.max_parabola_spread, o.parabola_spread);
    report.max_transformed_spread = std::max(report.max_transformed_spread, o.transformed_spread);
    par.push_back(o.parabola);
    tra.push_back(o.transformed);
  }
  report.parabola_monotone = strictly_monotone(par);
  report.transformed_monotone = strictly_monotone(tra);
  return report;
}

}  // namespace lienard
