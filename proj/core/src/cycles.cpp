#include "lienard/cycles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "lienard/errors.hpp"
#include "lienard/parallel.hpp"

namespace lienard {

std::string to_string(Stability s) { return s == Stability::attracting ? "attracting" : "repelling"; }

Stability opposite(Stability s) { return s == Stability::attracting ? Stability::repelling : Stability::attracting; }

Stability CycleSet::infinity_stability() const {
  return opposite(cycles.empty() ? origin_stability : cycles.back().stability);
}

ReturnResult return_map(const LienardField& field, double s, const FlowSettings& settings) {
  if (!(s > 0.0)) throw ValidationFailure("return_map needs s > 0");
  const auto events = section_crossings(field, {0.0, s}, 1, settings);
  return {events.front().point.y, events.front().time};
}

double default_scan_limit(const UniPoly& F) { return 2.0 + 2.0 * F.max_real_root_magnitude(); }

std::vector<double> scan_grid(double s_min, double s_max, int samples) {
  if (samples < 4) throw ValidationFailure("scan needs at least 4 samples");
  if (!(s_max > 0.0) || !(s_min > 0.0)) throw ValidationFailure("scan limits must be positive");
  std::vector<double> grid;
  grid.reserve(samples);
  if (s_max <= 1.0) {
    const double lo = s_min * s_max;
    const double ratio = std::log(s_max / lo);
    for (int k = 0; k < samples; ++k) grid.push_back(lo * std::exp(ratio * k / (samples - 1)));
    grid.back() = s_max;
    return grid;
  }
  const int n_geo = samples / 4;
  const double ratio = std::log(1.0 / s_min);
  for (int k = 0; k < n_geo; ++k) grid.push_back(s_min * std::exp(ratio * k / n_geo));
  const int n_uni = samples - n_geo;
  for (int k = 0; k < n_uni; ++k) grid.push_back(1.0 + (s_max - 1.0) * k / (n_uni - 1));
  return grid;
}

namespace {

double displacement(const LienardField& field, double s, const FlowSettings& settings) {
  try {
    return return_map(field, s, settings).next - s;
  } catch (const NoCrossing&) {
    return -s;
  } catch (const Escape&) {
    return std::numeric_limits<double>::infinity();
  }
}

// Bisection on a bracket [a, b] of a sign change of `d`.
template <class Fn>
double bisect(Fn&& d, double a, double b, double tol) {
  double da = d(a);
  for (int it = 0; it < 200 && b - a > tol; ++it) {
    const double m = 0.5 * (a + b);
    const double dm = d(m);
    if (dm == 0.0) return m;
    if ((dm < 0) == (da < 0)) {
      a = m;
      da = dm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

struct PairRhs {
  const LienardField* field;
  void operator()(const ode::State<4>& y, ode::State<4>& dy) const {
    const Point a = field->velocity({y[0], y[1]});
    const Point b = field->velocity({y[2], y[3]});
    dy = {a.x, a.y, b.x, b.y};
  }
};

// Returns (R(s - h), R(s + h)) from one joint integration so both orbits
// share a step sequence; the difference is then smooth in h.
std::pair<double, double> paired_returns(const LienardField& field, double s, double h,
                                         const FlowSettings& settings) {
  const double dir = field.direction();
  ode::DormandPrince<4, PairRhs> stepper(PairRhs{&field}, settings.control());
  stepper.start(0.0, {0.0, s - h, 0.0, s + h});
  std::array<double, 2> result{};
  std::array<bool, 2> done{false, false};
  while (!(done[0] && done[1])) {
    if (stepper.t() >= settings.max_time) throw NoCrossing("paired return did not complete");
    const ode::State<4> before = stepper.y();
    detail::guarded_step(stepper, settings.max_time, settings);
    detail::check_escape({stepper.y()[0], stepper.y()[1]}, settings);
    detail::check_escape({stepper.y()[2], stepper.y()[3]}, settings);
    for (std::size_t j = 0; j < 2; ++j) {
      if (done[j]) continue;
      const std::size_t xi = 2 * j;
      if (dir * before[xi] < 0.0 && dir * stepper.y()[xi] >= 0.0) {
        auto event = [dir, xi](const ode::State<4>& y) { return dir * y[xi]; };
        auto rate = [dir, xi](const ode::State<4>&, const ode::State<4>& dy) { return dir * dy[xi]; };
        const auto [tc, yc] = ode::locate_event(stepper, event, rate);
        if (yc[xi + 1] > 0.0) {
          result[j] = yc[xi + 1];
          done[j] = true;
        }
      }
    }
  }
  return {result[0], result[1]};
}

}  // namespace

std::vector<DisplacementSample> displacement_scan(const LienardField& field, const std::vector<double>& grid,
                                                  const FlowSettings& settings, unsigned threads) {
  std::vector<DisplacementSample> out(grid.size());
  parallel_for(grid.size(), threads, [&](std::size_t k) { out[k] = {grid[k], displacement(field, grid[k], settings)}; });
  return out;
}

MultiplierEstimate multiplier_estimates(const LienardField& field, double section_y, double period,
                                        const FlowSettings& settings) {
  MultiplierEstimate est;
  const auto divergence_integral = [&](const LienardField& f) {
    const ScalarFn div = [&f](Point p) { return f.divergence(p); };
    return flow_with_quadrature(f, {0.0, section_y}, div, period, settings).integral;
  };
  // Following a repelling cycle forward amplifies the error in section_y by
  // the multiplier itself, and so does differencing its expanding return
  // map. Both estimates therefore run on whichever of the field and its
  // reversal makes the cycle attract, inverting at the end.
  const double forward = divergence_integral(field);
  const bool expanding = forward > 0.0;
  const LienardField contracting = expanding ? field.reversed() : field;
  est.from_divergence = expanding ? std::exp(-divergence_integral(contracting)) : std::exp(forward);
  const double scale = std::max(1.0, section_y);
  constexpr std::array<double, 3> kSteps{1e-4, 1e-5, 1e-6};
  for (std::size_t k = 0; k < kSteps.size(); ++k) {
    const double h = std::min(kSteps[k] * scale, 0.5 * section_y);
    const auto [lo, hi] = paired_returns(contracting, section_y, h, settings);
    est.sweep[k] = (hi - lo) / (2.0 * h);
    if (expanding) est.sweep[k] = 1.0 / est.sweep[k];
  }
  // Take the coarser step of the most self-consistent adjacent pair: it has
  // the least roundoff while its truncation error is already resolved.
  const double gap01 = std::abs(est.sweep[0] - est.sweep[1]);
  const double gap12 = std::abs(est.sweep[1] - est.sweep[2]);
  const std::size_t pick = gap01 <= gap12 ? 0 : 1;
  est.finite_difference = est.sweep[pick];
  est.fd_step = kSteps[pick] * scale;
  est.relative_gap = std::abs(est.from_divergence - est.finite_difference) / std::abs(est.finite_difference);
  return est;
}

double multiplier(const LienardField& field, const LimitCycle& cycle, const FlowSettings& settings,
                  double tolerance) {
  const MultiplierEstimate est = multiplier_estimates(field, cycle.section_y, cycle.period, settings);
  if (!(est.relative_gap <= tolerance)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "multiplier cross-check failed: exp(int div)=" << est.from_divergence
        << " vs R'(s*)=" << est.finite_difference << " (relative gap " << est.relative_gap << ")";
    throw CrossCheckFailure(msg.str());
  }
  return est.from_divergence;
}

std::vector<Point> cycle_points(const LienardField& field, const LimitCycle& cycle, int m,
                                const FlowSettings& settings) {
  if (m < 8) throw ValidationFailure("cycle_points needs m >= 8");
  std::vector<double> times(m);
  for (int k = 0; k < m; ++k) times[k] = cycle.period * k / m;
  auto pts = flow_samples(field, {0.0, cycle.section_y}, times, settings);
  pts.front() = {0.0, cycle.section_y};
  return pts;
}

CycleSet find_cycles(const LienardField& field, const CycleSearchOptions& options, const FlowSettings& settings) {
  settings.validate();
  const PathwayDiagnosis diag = field.validate();
  if (!diag.ok()) throw ValidationFailure("field is outside the hyperbolic-cycle pathway: " + diag.describe());

  const double s_max = options.s_max > 0.0 ? options.s_max : default_scan_limit(field.F());
  const auto grid = scan_grid(options.s_min, s_max, options.samples);
  const auto samples = displacement_scan(field, grid, settings, options.threads);

  struct Bracket {
    double lo, hi;
    bool attracting;
  };
  std::vector<Bracket> brackets;
  for (std::size_t k = 0; k + 1 < samples.size(); ++k) {
    const double a = samples[k].displacement;
    const double b = samples[k + 1].displacement;
    if ((a < 0) != (b < 0)) brackets.push_back({samples[k].s, samples[k + 1].s, a >= 0 && b < 0});
  }

  const LienardField backward = field.reversed();
  std::vector<LimitCycle> found(brackets.size());
  parallel_for(brackets.size(), options.threads, [&](std::size_t k) {
    const Bracket& br = brackets[k];
    // Repelling cycles attract under the reversed flow; refine there.
    const LienardField& refine_field = br.attracting ? field : backward;
    const double s_star = bisect([&](double s) { return displacement(refine_field, s, settings); }, br.lo, br.hi,
                                 options.refine_tol);
    const ReturnResult ret = return_map(field, s_star, settings);
    LimitCycle c;
    c.section_y = s_star;
    c.period = ret.return_time;
    c.fixed_point_residual = std::abs(ret.next - s_star);
    const MultiplierEstimate est = multiplier_estimates(field, s_star, c.period, settings);
    c.multiplier = est.from_divergence;
    c.fd_multiplier = est.finite_difference;
    if (!(std::abs(std::log(c.multiplier)) > options.hyperbolicity_margin)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "cycle at section_y=" << s_star << " has |log multiplier| <= " << options.hyperbolicity_margin;
      throw SuspectedNonHyperbolic(msg.str());
    }
    if (!(est.relative_gap <= options.cross_check_tol)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "multiplier cross-check failed at section_y=" << s_star << ": " << est.from_divergence << " vs "
          << est.finite_difference;
      throw CrossCheckFailure(msg.str());
    }
    c.stability = c.multiplier < 1.0 ? Stability::attracting : Stability::repelling;
    found[k] = c;
  });

  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.section_y < b.section_y; });
  std::vector<LimitCycle> unique;
  for (const auto& c : found) {
    if (!unique.empty() && std::abs(c.section_y - unique.back().section_y) < 1e-8) continue;
    unique.push_back(c);
  }

  CycleSet set;
  set.origin_stability = field.direction() * field.F().coefficient(1).sign() > 0 ? Stability::attracting
                                                                                  : Stability::repelling;
  Stability expected = opposite(set.origin_stability);
  for (std::size_t k = 0; k < unique.size(); ++k) {
    unique[k].nesting_index = static_cast<int>(k) + 1;
    if (unique[k].stability != expected) {
      throw SuspectedNonHyperbolic("stabilities do not alternate at cycle " + std::to_string(k + 1) +
                                   "; a close pair of cycles may be unresolved");
    }
    expected = opposite(expected);
  }
  set.cycles = std::move(unique);
  return set;
}

}  // namespace lienard
