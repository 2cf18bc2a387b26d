#include "lienard/cohomology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "lienard/errors.hpp"
#include "lienard/parallel.hpp"

namespace lienard {

// ------------------------------------------------------------ small types

int LimitSet::ordinal(std::size_t n) const {
  switch (kind) {
    case Kind::origin:
      return 0;
    case Kind::cycle:
      return cycle_index;
    case Kind::infinity:
      return static_cast<int>(n) + 1;
  }
  return 0;
}

LimitSet LimitSet::from_ordinal(int ordinal, std::size_t n) {
  if (ordinal == 0) return {Kind::origin, 0};
  if (ordinal == static_cast<int>(n) + 1) return {Kind::infinity, 0};
  return {Kind::cycle, ordinal};
}

std::string LimitSet::str() const {
  switch (kind) {
    case Kind::origin:
      return "origin";
    case Kind::cycle:
      return "cycle " + std::to_string(cycle_index);
    case Kind::infinity:
      return "infinity";
  }
  return {};
}

std::string RegionLabel::str() const {
  switch (kind) {
    case RegionKind::inner_disk:
      return "inner_disk";
    case RegionKind::annulus:
      return "annulus(" + std::to_string(annulus_index) + ")";
    case RegionKind::exterior:
      return "exterior";
  }
  return {};
}

std::size_t GridSpec::nx() const { return static_cast<std::size_t>(std::llround((x_max - x_min) / h)) + 1; }
std::size_t GridSpec::ny() const { return static_cast<std::size_t>(std::llround((y_max - y_min) / h)) + 1; }
Point GridSpec::at(std::size_t ix, std::size_t iy) const {
  return {x_min + static_cast<double>(ix) * h, y_min + static_cast<double>(iy) * h};
}

namespace {

double wrap_phase(double tau, double period) {
  tau = std::fmod(tau, period);
  if (tau < 0) tau += period;
  if (tau >= period) tau -= period;
  return tau;
}

// Least-squares slope of ys against xs.
double fitted_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  if (xs.size() < 2) return 0.0;
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxy += (xs[k] - mx) * (ys[k] - my);
    sxx += (xs[k] - mx) * (xs[k] - mx);
  }
  return sxx == 0.0 ? 0.0 : sxy / sxx;
}

struct TrajectoryQuadRhs {
  const LienardField* field;
  const Rhs* f;
  void operator()(const ode::State<3>& y, ode::State<3>& dy) const {
    const Point p{y[0], y[1]};
    const Point v = field->velocity(p);
    dy = {v.x, v.y, (*f)(p)};
  }
};

// Point and its asymptotic phase advanced together, with the integral of
// f(p) - f(x*) and of f(p) alone.
struct PairQuadRhs {
  const LienardField* field;
  const Rhs* f;
  void operator()(const ode::State<6>& y, ode::State<6>& dy) const {
    const Point p{y[0], y[1]};
    const Point s{y[2], y[3]};
    const Point vp = field->velocity(p);
    const Point vs = field->velocity(s);
    const double fp = (*f)(p);
    dy = {vp.x, vp.y, vs.x, vs.y, fp - (*f)(s), fp};
  }
};

}  // namespace

// ---------------------------------------------------------------- solver

CohomologySolver::CohomologySolver(LienardField field, CycleSet cycles, Rhs f, FlowSettings settings,
                                   SolverOptions options)
    : field_(field.direction() > 0 ? std::move(field) : field.reversed()),
      cycles_(std::move(cycles)),
      f_(std::move(f)),
      settings_(settings),
      options_(options) {
  settings_.validate();
  const int m = std::max(8, options_.trace_points);
  data_.resize(cycles_.count());
  for (std::size_t i = 0; i < cycles_.count(); ++i) {
    const LimitCycle& c = cycles_.cycles[i];
    CycleData& d = data_[i];
    d.trace = cycle_points(field_, c, m, settings_);
    d.times.resize(m);
    for (int k = 0; k < m; ++k) d.times[k] = c.period * k / m;
    d.cumulative.assign(m + 1, 0.0);
    ode::DormandPrince<3, TrajectoryQuadRhs> stepper(TrajectoryQuadRhs{&field_, &f_}, settings_.control());
    stepper.start(0.0, {0.0, c.section_y, 0.0});
    for (int k = 1; k <= m; ++k) {
      const double t = k < m ? d.times[k] : c.period;
      while (stepper.t() < t) detail::guarded_step(stepper, t, settings_);
      d.cumulative[k] = stepper.y()[2];
    }
    d.loop_integral = d.cumulative[m];
    d.drift = norm(flow(field_, {0.0, c.section_y}, c.period, settings_) - Point{0.0, c.section_y});
  }
  chain_.constants.assign(cycles_.count() + 1, 0.0);
  chain_.discrepancies.assign(cycles_.count(), 0.0);
}

Stability CohomologySolver::set_stability(int ordinal) const {
  const int n = static_cast<int>(cycles_.count());
  if (ordinal == 0) return cycles_.origin_stability;
  if (ordinal == n + 1) return cycles_.infinity_stability();
  return cycles_.cycles[ordinal - 1].stability;
}

double CohomologySolver::origin_rate() const {
  const double a = std::abs(field_.F().coefficient(1).to_double());
  return a < 2.0 ? 0.5 * a : 0.5 * (a - std::sqrt(a * a - 4.0));
}

RegionLabel CohomologySolver::label_for_region(int region, double) const {
  const std::size_t n = cycles_.count();
  RegionLabel label;
  if (region == 0) {
    label.kind = RegionKind::inner_disk;
  } else if (region == static_cast<int>(n)) {
    label.kind = RegionKind::exterior;
  } else {
    label.kind = RegionKind::annulus;
    label.annulus_index = region;
  }
  const LimitSet inner = LimitSet::from_ordinal(region, n);
  const LimitSet outer = LimitSet::from_ordinal(region + 1, n);
  if (set_stability(region) == Stability::attracting) {
    label.forward_limit = inner;
    label.backward_limit = outer;
  } else {
    label.forward_limit = outer;
    label.backward_limit = inner;
  }
  label.solver_uses_backward = label.forward_limit.kind == LimitSet::Kind::infinity;
  return label;
}

CohomologySolver::Classified CohomologySolver::classify_full(Point p) const {
  Classified out;
  double s = 0.0;
  if (p.x == 0.0 && p.y == 0.0) {
    s = 0.0;
  } else {
    try {
      s = section_crossings(field_, p, 1, settings_).front().point.y;
    } catch (const NoCrossing&) {
      s = 0.0;  // collapsed onto the origin
    } catch (const Escape&) {
      try {
        s = section_crossings(field_.reversed(), p, 1, settings_).front().point.y;
      } catch (const Error&) {
        s = std::numeric_limits<double>::infinity();
      }
    }
  }
  int region = 0;
  for (const auto& c : cycles_.cycles) {
    if (c.section_y < s) ++region;
  }
  out.section = s;
  out.label = label_for_region(region, s);
  return out;
}

RegionLabel CohomologySolver::classify(Point p) const { return classify_full(p).label; }

bool CohomologySolver::is_excluded(const Classified& c) const {
  const std::size_t n = cycles_.count();
  auto section_of = [this](int ordinal) {
    return ordinal == 0 ? 0.0 : cycles_.cycles[static_cast<std::size_t>(ordinal) - 1].section_y;
  };
  const int inner = c.label.kind == RegionKind::inner_disk ? 0
                    : c.label.kind == RegionKind::exterior ? static_cast<int>(n)
                                                           : c.label.annulus_index;
  const int outer = inner + 1;
  for (int b : {inner, outer}) {
    if (b >= 1 && b <= static_cast<int>(n) && std::abs(c.section - section_of(b)) < options_.cycle_clearance) {
      return true;
    }
  }
  const LimitSet& used = c.label.solver_limit();
  const LimitSet& other = c.label.solver_uses_backward ? c.label.forward_limit : c.label.backward_limit;
  (void)used;
  if (other.kind == LimitSet::Kind::infinity) return false;
  const int o = other.ordinal(n);
  double rate = 0.0;
  if (o == 0) {
    rate = origin_rate();
  } else {
    const LimitCycle& cyc = cycles_.cycles[static_cast<std::size_t>(o) - 1];
    rate = std::abs(std::log(cyc.multiplier)) / cyc.period;
  }
  double gap = 0.0;
  if (outer <= static_cast<int>(n)) {
    gap = section_of(outer) - section_of(inner);
  } else {
    gap = section_of(inner);
  }
  const double delta =
      gap * std::max(settings_.rel_tol / options_.tube_tol, std::exp(-options_.escape_time_cap * rate));
  return std::abs(c.section - section_of(o)) < delta;
}

bool CohomologySolver::excluded(Point p, RegionLabel* label) const {
  const Classified c = classify_full(p);
  if (label != nullptr) *label = c.label;
  return is_excluded(c);
}

std::pair<double, Point> CohomologySolver::project_to_cycle(int cycle_index, Point target) const {
  const CycleData& d = data_[static_cast<std::size_t>(cycle_index) - 1];
  const double period = cycles_.cycles[static_cast<std::size_t>(cycle_index) - 1].period;
  std::size_t j = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < d.trace.size(); ++k) {
    const double dist = norm(d.trace[k] - target);
    if (dist < best) {
      best = dist;
      j = k;
    }
  }
  // Gauss-Newton on the phase time: minimise |phi_tau(base) - target|.
  double tau = d.times[j];
  Point q = d.trace[j];
  for (int it = 0; it < 12; ++it) {
    q = flow(field_, d.trace[j], tau - d.times[j], settings_);
    const Point v = field_.velocity(q);
    const double step = dot(v, q - target) / dot(v, v);
    tau -= step;
    if (std::abs(step) < 1e-15 * std::max(1.0, period)) break;
  }
  q = flow(field_, d.trace[j], tau - d.times[j], settings_);
  return {wrap_phase(tau, period), q};
}

double CohomologySolver::cycle_position_integral(int cycle_index, double tau) const {
  const CycleData& d = data_[static_cast<std::size_t>(cycle_index) - 1];
  const double period = cycles_.cycles[static_cast<std::size_t>(cycle_index) - 1].period;
  const auto m = d.trace.size();
  auto j = static_cast<std::size_t>(std::floor(tau / (period / static_cast<double>(m))));
  j = std::min(j, m - 1);
  const ScalarFn integrand = [this](Point p) { return f_(p); };
  return d.cumulative[j] + flow_with_quadrature(field_, d.trace[j], integrand, tau - d.times[j], settings_).integral;
}

PhaseResult CohomologySolver::asymptotic_phase(int cycle_index, Point p, int direction) const {
  if (cycle_index < 1 || cycle_index > static_cast<int>(cycles_.count())) {
    throw std::out_of_range("asymptotic_phase: cycle index out of range");
  }
  const LimitCycle& cyc = cycles_.cycles[static_cast<std::size_t>(cycle_index) - 1];
  const CycleData& d = data_[static_cast<std::size_t>(cycle_index) - 1];
  const LienardField f = direction > 0 ? field_ : field_.reversed();
  const double tol = std::max(1e-10, 10.0 * d.drift);

  PhaseResult out;
  Point prev = p;
  double d_prev = std::numeric_limits<double>::quiet_NaN();
  bool converged = false;
  for (int k = 1; k <= options_.max_periods; ++k) {
    const Point next = flow(f, prev, cyc.period, settings_);
    const double dist = norm(next - prev);
    if (std::isfinite(d_prev) && d_prev > 1e-8 && dist > 1e3 * tol) out.convergence_ratio = dist / d_prev;
    out.iterations = k;
    out.residual = dist;
    prev = next;
    // Converged, or stalled at the integration noise floor.
    if (dist < tol || (dist < 1e-8 && std::isfinite(d_prev) && dist > 0.5 * d_prev)) {
      converged = true;
      break;
    }
    d_prev = dist;
  }
  if (!converged) {
    std::ostringstream msg;
    msg << "period-map iteration did not settle on cycle " << cycle_index << " (last step " << out.residual << ")";
    throw NoConvergence(msg.str());
  }
  const auto [tau, x_star] = project_to_cycle(cycle_index, prev);
  out.x_star = x_star;
  out.phase_time = direction > 0 ? tau : wrap_phase(cyc.period - tau, cyc.period);
  return out;
}

SolveValue CohomologySolver::origin_formula(int direction, Point p) const {
  const LienardField f = direction > 0 ? field_ : field_.reversed();
  const double rate = origin_rate();
  if (!(rate > 0)) throw NoConvergence("origin is not hyperbolic");

  // Local Lipschitz bound of f at the origin.
  double lip = norm(f_.gradient({0.0, 0.0}));
  constexpr double r = 1e-3;
  const double f0 = f_({0.0, 0.0});
  for (int k = 0; k < 8; ++k) {
    const double a = 2.0 * M_PI * k / 8.0;
    lip = std::max(lip, std::abs(f_({r * std::cos(a), r * std::sin(a)}) - f0) / r);
  }
  const double delta0 = std::min(1e-3, lip > 0 ? options_.origin_tail_tol * rate / lip : 1e-3);

  ode::DormandPrince<3, TrajectoryQuadRhs> stepper(TrajectoryQuadRhs{&f, &f_}, settings_.control());
  stepper.start(0.0, {p.x, p.y, 0.0});
  std::vector<double> ts{0.0};
  std::vector<double> ss{0.0};
  while (norm({stepper.y()[0], stepper.y()[1]}) >= delta0) {
    if (stepper.t() >= settings_.max_time) throw NoConvergence("trajectory did not reach the origin in max_time");
    detail::guarded_step(stepper, settings_.max_time, settings_);
    detail::check_escape({stepper.y()[0], stepper.y()[1]}, settings_);
    ts.push_back(stepper.t());
    ss.push_back(stepper.y()[2]);
  }
  const double t_end = stepper.t();
  const double window = std::min(0.5 * t_end, 20.0);
  std::vector<double> wt;
  std::vector<double> ws;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    if (ts[k] >= t_end - window) {
      wt.push_back(ts[k]);
      ws.push_back(ss[k]);
    }
  }
  const double slope = fitted_slope(wt, ws);
  if (std::abs(slope) > options_.obstruction_tol) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "origin integral diverges: partial sums grow at " << slope << " per unit time";
    throw ObstructionDivergence(msg.str(), slope);
  }
  const double s_end = stepper.y()[2];
  const double tail = 2.0 * lip * norm({stepper.y()[0], stepper.y()[1]}) / rate;
  return {-direction * s_end, tail + 10.0 * settings_.rel_tol * (1.0 + std::abs(s_end))};
}

SolveValue CohomologySolver::cycle_formula(int cycle_index, int direction, Point p) const {
  const LimitCycle& cyc = cycles_.cycles[static_cast<std::size_t>(cycle_index) - 1];
  const double rho = direction > 0 ? cyc.multiplier : 1.0 / cyc.multiplier;
  if (!(rho < 1.0)) throw std::logic_error("cycle formula used in a non-attracting direction");
  const LienardField f = direction > 0 ? field_ : field_.reversed();

  const PhaseResult phase = asymptotic_phase(cycle_index, p, direction);
  const double tau_forward = direction > 0 ? phase.phase_time : wrap_phase(cyc.period - phase.phase_time, cyc.period);
  const double on_cycle = cycle_position_integral(cycle_index, tau_forward);

  ode::DormandPrince<6, PairQuadRhs> stepper(PairQuadRhs{&f, &f_}, settings_.control());
  stepper.start(0.0, {p.x, p.y, phase.x_star.x, phase.x_star.y, 0.0, 0.0});
  std::vector<double> times{0.0};
  std::vector<double> sums{0.0};
  double d_prev = 0.0;
  double increment = std::numeric_limits<double>::infinity();
  double raw_increment = 0.0;
  bool done = false;
  for (int k = 1; k <= options_.max_periods; ++k) {
    const double t = k * cyc.period;
    while (stepper.t() < t) {
      detail::guarded_step(stepper, t, settings_);
      detail::check_escape({stepper.y()[0], stepper.y()[1]}, settings_);
    }
    const double dk = stepper.y()[4];
    increment = dk - d_prev;
    d_prev = dk;
    raw_increment = stepper.y()[5] - sums.back();
    times.push_back(t);
    sums.push_back(stepper.y()[5]);
    if (k >= 3 && std::abs(increment) < options_.increment_tol) {
      done = true;
      break;
    }
  }
  if (!done) throw NoConvergence("cycle integral did not converge within max_periods");
  if (std::abs(raw_increment) > options_.obstruction_tol * cyc.period) {
    const std::size_t keep = std::min<std::size_t>(times.size() - 1, 5);
    const std::vector<double> wt(times.end() - static_cast<long>(keep), times.end());
    const std::vector<double> ws(sums.end() - static_cast<long>(keep), sums.end());
    const double slope = fitted_slope(wt, ws);
    std::ostringstream msg;
    msg.precision(17);
    msg << "cycle " << cycle_index << " integral diverges: partial sums grow at " << slope << " per unit time";
    throw ObstructionDivergence(msg.str(), slope);
  }
  const double tail = std::abs(increment) * rho / (1.0 - rho);
  const double sign = options_.paper_sign ? 1.0 : -1.0;
  const double value = on_cycle + sign * direction * d_prev;
  const double err = tail + 10.0 * settings_.rel_tol * (1.0 + std::abs(d_prev) + std::abs(on_cycle));
  return {value, err};
}

SolveValue CohomologySolver::set_formula(int set, Point p) const {
  if (set == 0) {
    return origin_formula(cycles_.origin_stability == Stability::attracting ? 1 : -1, p);
  }
  const LimitCycle& cyc = cycles_.cycles.at(static_cast<std::size_t>(set) - 1);
  return cycle_formula(set, cyc.stability == Stability::attracting ? 1 : -1, p);
}

const ChainResult& CohomologySolver::chain() {
  const std::size_t n = cycles_.count();
  ChainResult result;
  result.constants.assign(n + 1, 0.0);
  result.discrepancies.assign(n, 0.0);
  for (std::size_t i = 1; i <= n; ++i) {
    const double s_i = cycles_.cycles[i - 1].section_y;
    const double s_prev = i == 1 ? 0.0 : cycles_.cycles[i - 2].section_y;
    const double gap = s_i - s_prev;
    double estimates[2];
    const double fractions[2] = {options_.probe_fraction, options_.second_probe_fraction};
    for (int k = 0; k < 2; ++k) {
      const Point probe{0.0, s_i - fractions[k] * gap};
      const double inner = set_formula(static_cast<int>(i) - 1, probe).value;
      const double outer = set_formula(static_cast<int>(i), probe).value;
      estimates[k] = result.constants[i - 1] + inner - outer;
    }
    result.constants[i] = estimates[0];
    result.discrepancies[i - 1] = std::abs(estimates[0] - estimates[1]);
    if (result.discrepancies[i - 1] > options_.match_tol) {
      std::ostringstream msg;
      msg << "constant for cycle " << i << " mismatched by " << result.discrepancies[i - 1];
      throw MatchFailure(msg.str());
    }
  }
  chain_ = std::move(result);
  return chain_;
}

void CohomologySolver::set_constants(ChainResult chain) {
  if (chain.constants.size() != cycles_.count() + 1) throw std::invalid_argument("constants size mismatch");
  chain_ = std::move(chain);
}

SolveValue CohomologySolver::solve_at(Point p) const {
  const Classified c = classify_full(p);
  if (p.x == 0.0 && p.y == 0.0) return {chain_.constants[0], 0.0};
  const LimitSet& lim = c.label.solver_limit();
  const int set = lim.kind == LimitSet::Kind::origin ? 0 : lim.cycle_index;
  SolveValue v = set_formula(set, p);
  v.value += chain_.constants[static_cast<std::size_t>(set)];
  return v;
}

CohomSolution CohomologySolver::solve_grid(const GridSpec& grid) const {
  CohomSolution sol;
  sol.grid = grid;
  sol.chain = chain_;
  const std::size_t nx = grid.nx();
  const std::size_t ny = grid.ny();
  const std::size_t total = nx * ny;
  sol.values.assign(total, std::numeric_limits<double>::quiet_NaN());
  sol.status.assign(total, PointStatus::solved);
  sol.labels.assign(total, RegionLabel{});
  sol.truncation_error.assign(total, std::numeric_limits<double>::quiet_NaN());
  std::vector<std::string> failure_kind(total);
  std::vector<double> failure_slope(total, std::numeric_limits<double>::quiet_NaN());

  parallel_for(total, options_.threads, [&](std::size_t idx) {
    const Point p = grid.at(idx % nx, idx / nx);
    try {
      const Classified c = classify_full(p);
      sol.labels[idx] = c.label;
      if (p.x == 0.0 && p.y == 0.0) {
        sol.values[idx] = chain_.constants[0];
        sol.truncation_error[idx] = 0.0;
        return;
      }
      if (is_excluded(c)) {
        sol.status[idx] = PointStatus::excluded;
        return;
      }
      const LimitSet& lim = c.label.solver_limit();
      const int set = lim.kind == LimitSet::Kind::origin ? 0 : lim.cycle_index;
      const SolveValue v = set_formula(set, p);
      sol.values[idx] = v.value + chain_.constants[static_cast<std::size_t>(set)];
      sol.truncation_error[idx] = v.error_bound;
    } catch (const ObstructionDivergence& e) {
      sol.status[idx] = PointStatus::failed;
      failure_kind[idx] = e.kind();
      failure_slope[idx] = e.slope();
    } catch (const Error& e) {
      sol.status[idx] = PointStatus::failed;
      failure_kind[idx] = e.kind();
    }
  });

  double slope_sum = 0.0;
  std::size_t slope_count = 0;
  for (std::size_t idx = 0; idx < total; ++idx) {
    if (sol.status[idx] == PointStatus::excluded) ++sol.excluded_count;
    if (sol.status[idx] == PointStatus::failed) {
      ++sol.failed_count;
      sol.failures.emplace_back(idx, failure_kind[idx]);
      if (std::isfinite(failure_slope[idx])) {
        slope_sum += failure_slope[idx];
        ++slope_count;
      }
    }
  }
  if (slope_count > 0) sol.divergence_slope = slope_sum / static_cast<double>(slope_count);
  return sol;
}

double CohomologySolver::verify_residual(const CohomSolution& solution, int sample_count, double h,
                                         std::uint64_t seed) const {
  std::vector<std::size_t> solved;
  for (std::size_t idx = 0; idx < solution.status.size(); ++idx) {
    const Point p = solution.grid.at(idx % solution.grid.nx(), idx / solution.grid.nx());
    if (solution.status[idx] == PointStatus::solved && !(p.x == 0.0 && p.y == 0.0)) solved.push_back(idx);
  }
  if (solved.empty() || sample_count <= 0) return 0.0;
  std::mt19937_64 rng(seed);
  std::shuffle(solved.begin(), solved.end(), rng);
  const std::size_t count = std::min<std::size_t>(solved.size(), static_cast<std::size_t>(sample_count));
  std::vector<double> residuals(count, 0.0);
  parallel_for(count, options_.threads, [&](std::size_t k) {
    const std::size_t idx = solved[k];
    const Point p = solution.grid.at(idx % solution.grid.nx(), idx / solution.grid.nx());
    const Point ahead = flow(field_, p, h, settings_);
    const Point behind = flow(field_, p, -h, settings_);
    const double estimate = (solve_at(ahead).value - solve_at(behind).value) / (2.0 * h);
    residuals[k] = std::abs(estimate - f_(p));
  });
  return *std::max_element(residuals.begin(), residuals.end());
}

// --------------------------------------------------------- free functions

RegionLabel classify_region(const LienardField& field, const CycleSet& cycles, Point p, const FlowSettings& settings) {
  return CohomologySolver(field, cycles, Rhs::zero(), settings).classify(p);
}

PhaseResult asymptotic_phase(const LienardField& field, const CycleSet& cycles, int cycle_index, Point p,
                             const FlowSettings& settings) {
  const CohomologySolver solver(field, cycles, Rhs::zero(), settings);
  return solver.asymptotic_phase(cycle_index, p, field.direction());
}

SolveValue solve_at(const LienardField& field, const CycleSet& cycles, const Rhs& f, Point p,
                    const FlowSettings& settings, const SolverOptions& options) {
  CohomologySolver solver(field, cycles, f, settings, options);
  solver.chain();
  return solver.solve_at(p);
}

ChainResult chain_constants(const LienardField& field, const CycleSet& cycles, const Rhs& f,
                            const FlowSettings& settings, const SolverOptions& options) {
  CohomologySolver solver(field, cycles, f, settings, options);
  return solver.chain();
}

CohomSolution solve_grid(const LienardField& field, const CycleSet& cycles, const Rhs& f, const GridSpec& grid,
                         const FlowSettings& settings, const SolverOptions& options) {
  const ObstructionReport report = admissibility(field, cycles, f, options.obstruction_tol, settings);
  if (!report.admissible && !options.force) throw InadmissibleRhs(report);
  CohomologySolver solver(field, cycles, f, settings, options);
  std::optional<std::string> chain_failure;
  try {
    solver.chain();
  } catch (const Error& e) {
    if (!options.force) throw;
    chain_failure = e.kind() + ": " + e.what();
  }
  CohomSolution sol = solver.solve_grid(grid);
  sol.chain_failure = chain_failure;
  sol.residual_max = solver.verify_residual(sol, 200);
  return sol;
}

}  // namespace lienard
