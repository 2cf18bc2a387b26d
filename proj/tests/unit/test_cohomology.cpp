#include <doctest.h>

#include <cmath>
#include <random>

#include "corpus.hpp"
#include "lienard/cohomology.hpp"
#include "lienard/errors.hpp"
#include "oracles.hpp"

using namespace lienard;
using namespace lienard::testing;

namespace {

const CycleSet& vdp_cycles() {
  static const CycleSet cs = find_cycles(van_der_pol(), {}, {});
  return cs;
}

const CycleSet& two_cycles() {
  static const CycleSet cs = find_cycles(two_cycle(), {}, {});
  return cs;
}

BiPoly g_xy() { return BiPoly::x() * BiPoly::x() + BiPoly::x() * BiPoly::y(); }

GridSpec small_box() { return {-3, 3, -3, 3, 0.5}; }

}  // namespace

TEST_SUITE("cohomology") {
  TEST_CASE("region classification examples") {
    const RegionLabel inner = classify_region(van_der_pol(), vdp_cycles(), {0.01, 0});
    CHECK(inner.kind == RegionKind::inner_disk);
    CHECK(inner.forward_limit == LimitSet{LimitSet::Kind::cycle, 1});
    CHECK(inner.backward_limit.kind == LimitSet::Kind::origin);
    CHECK_FALSE(inner.solver_uses_backward);

    const RegionLabel outer = classify_region(van_der_pol(), vdp_cycles(), {10, 10});
    CHECK(outer.kind == RegionKind::exterior);
    CHECK(outer.forward_limit == LimitSet{LimitSet::Kind::cycle, 1});
    CHECK(outer.backward_limit.kind == LimitSet::Kind::infinity);

    const double mid = 0.5 * (two_cycles().cycles[0].section_y + two_cycles().cycles[1].section_y);
    const RegionLabel ann = classify_region(two_cycle(), two_cycles(), {0, mid});
    CHECK(ann.kind == RegionKind::annulus);
    CHECK(ann.annulus_index == 1);
    CHECK(ann.forward_limit == LimitSet{LimitSet::Kind::cycle, 2});
    CHECK(ann.backward_limit == LimitSet{LimitSet::Kind::cycle, 1});

    // Exterior of the two-cycle field: outer cycle attracts, infinity repels.
    const RegionLabel ext = classify_region(two_cycle(), two_cycles(), {3, 0});
    CHECK(ext.kind == RegionKind::exterior);
    CHECK(ext.forward_limit == LimitSet{LimitSet::Kind::cycle, 2});
    const RegionLabel disk = classify_region(two_cycle(), two_cycles(), {0.3, 0});
    CHECK(disk.forward_limit.kind == LimitSet::Kind::origin);
    CHECK(disk.backward_limit == LimitSet{LimitSet::Kind::cycle, 1});
  }

  TEST_CASE("labels pair adjacent boundary objects") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> coord(-3, 3);
    for (int k = 0; k < 40; ++k) {
      const RegionLabel l = classify_region(two_cycle(), two_cycles(), {coord(rng), coord(rng)});
      const int a = l.forward_limit.ordinal(2);
      const int b = l.backward_limit.ordinal(2);
      CHECK(std::abs(a - b) == 1);
      CHECK(l.solver_limit().kind != LimitSet::Kind::infinity);
    }
  }

  TEST_CASE("asymptotic phase of points on the cycle") {
    const LimitCycle& c = vdp_cycles().cycles[0];
    const Point base{0, c.section_y};
    const PhaseResult on = asymptotic_phase(van_der_pol(), vdp_cycles(), 1, base);
    CHECK(norm(on.x_star - base) < 1e-9);
    CHECK(on.iterations <= 1);
    CHECK(on.phase_time >= 0);
    CHECK(on.phase_time < c.period);

    const Point half = flow(van_der_pol(), base, c.period / 2, {});
    const PhaseResult h = asymptotic_phase(van_der_pol(), vdp_cycles(), 1, half);
    CHECK(norm(h.x_star - half) < 1e-8);
    CHECK(h.phase_time == doctest::Approx(c.period / 2).epsilon(1e-8));
  }

  TEST_CASE("asymptotic phase converges at the multiplier rate") {
    const FlowSettings s;
    const LimitCycle& c = vdp_cycles().cycles[0];
    const Point p{0, 3.0};
    const PhaseResult r = asymptotic_phase(van_der_pol(), vdp_cycles(), 1, p);
    CHECK(r.convergence_ratio == doctest::Approx(c.multiplier).epsilon(0.05));
    // Oracle: ratio of successive period-map steps computed here.
    const Point p1 = flow(van_der_pol(), p, c.period, s);
    const Point p2 = flow(van_der_pol(), p1, c.period, s);
    const Point p3 = flow(van_der_pol(), p2, c.period, s);
    const double ratio = norm(p3 - p2) / norm(p2 - p1);
    CHECK(ratio == doctest::Approx(c.multiplier).epsilon(0.05));
    // x* lies on the cycle.
    const ReturnResult back = return_map(van_der_pol(), c.section_y, s);
    CHECK(std::abs(back.next - c.section_y) < 1e-8);
    const auto next = section_crossings(van_der_pol(), r.x_star, 1, s);
    CHECK(std::abs(next[0].point.y - c.section_y) < 1e-8);
  }

  TEST_CASE("asymptotic phase is flow equivariant") {
    const FlowSettings s;
    for (Point p : {Point{0.5, 0.5}, Point{3, -1}}) {
      const PhaseResult base = asymptotic_phase(van_der_pol(), vdp_cycles(), 1, p);
      for (double t : {0.1, 1.0}) {
        const PhaseResult moved = asymptotic_phase(van_der_pol(), vdp_cycles(), 1, flow(van_der_pol(), p, t, s));
        CHECK(norm(moved.x_star - flow(van_der_pol(), base.x_star, t, s)) < 1e-6);
      }
    }
  }

  TEST_CASE("repelling cycle phase uses the reversed field") {
    const LimitCycle& inner = two_cycles().cycles[0];
    const Point p{0, inner.section_y * 1.05};
    const PhaseResult r = asymptotic_phase(two_cycle().reversed(), two_cycles(), 1, p);
    CHECK(r.convergence_ratio == doctest::Approx(1.0 / inner.multiplier).epsilon(0.05));
  }

  TEST_CASE("manufactured solutions at single points") {
    const Rhs f(lie_derivative_poly(van_der_pol(), g_xy()));
    for (Point p : {Point{0.5, 0.3}, Point{1, 1}, Point{3, -2}, Point{-3.5, 3.9}, Point{0, 2.5}}) {
      const SolveValue v = solve_at(van_der_pol(), vdp_cycles(), f, p);
      CHECK(v.error_bound <= 1e-3);
      CHECK(std::abs(v.value - g_xy().eval(p.x, p.y)) <= v.error_bound);
    }
  }

  TEST_CASE("zero right-hand side gives zero") {
    for (Point p : {Point{0.5, 0.3}, Point{3, -2}}) {
      CHECK(solve_at(van_der_pol(), vdp_cycles(), Rhs::zero(), p).value == 0.0);
      CHECK(solve_at(two_cycle(), two_cycles(), Rhs::zero(), p).value == 0.0);
    }
    const ChainResult c = chain_constants(two_cycle(), two_cycles(), Rhs::zero());
    for (double v : c.constants) CHECK(v == 0.0);
  }

  TEST_CASE("chained constants match the manufactured oracle") {
    // g0 = x^2 + xy + y^2, so the constant for cycle i is g0(0, s_i) - g0(0, 0).
    const BiPoly g0 = g_xy() + BiPoly::y() * BiPoly::y();
    for (const auto* which : {"van_der_pol", "two_cycle"}) {
      const bool vdp = std::string(which) == "van_der_pol";
      const LienardField field = vdp ? van_der_pol() : two_cycle();
      const CycleSet& cs = vdp ? vdp_cycles() : two_cycles();
      const ChainResult c = chain_constants(field, cs, Rhs(lie_derivative_poly(field, g0)));
      CHECK(c.constants[0] == 0.0);
      for (std::size_t i = 0; i < cs.count(); ++i) {
        const double oracle = g0.eval(0, cs.cycles[i].section_y);
        CHECK(std::abs(c.constants[i + 1] - oracle) < 1e-3);
        CHECK(c.discrepancies[i] < 1e-6);
      }
    }
  }

  TEST_CASE("obstructed right-hand sides diverge with the functional slope") {
    const LimitCycle& c = vdp_cycles().cycles[0];
    SolverOptions force;
    force.force = true;
    // f = 1 in the exterior: slope = loop integral / period = 1.
    try {
      solve_at(van_der_pol(), vdp_cycles(), Rhs::constant(1), {3, 3}, {}, force);
      FAIL("expected divergence");
    } catch (const ObstructionDivergence& e) {
      CHECK(e.slope() == doctest::Approx(1.0).epsilon(0.05));
    }
    // f = x^2 vanishes at the origin; only the cycle functional is violated.
    const BiPoly x2 = BiPoly::x() * BiPoly::x();
    const double ratio = cycle_integral(van_der_pol(), c, Rhs(x2), {}) / c.period;
    CohomologySolver solver(van_der_pol(), vdp_cycles(), Rhs(x2));
    try {
      (void)solver.set_formula(1, {3, 3});
      FAIL("expected divergence");
    } catch (const ObstructionDivergence& e) {
      CHECK(e.slope() == doctest::Approx(ratio).epsilon(0.05));
    }
    // Only the origin functional: f(0) = 1 with zero loop integral.
    const double scale = c.period / cycle_integral(van_der_pol(), c, Rhs(x2), {});
    const Rhs g([scale](Point p) { return 1.0 - scale * p.x * p.x; }, "1 - c x^2");
    CHECK(std::abs(cycle_integral(van_der_pol(), c, g, {})) < 1e-8);
    try {
      chain_constants(van_der_pol(), vdp_cycles(), g);
      FAIL("expected divergence");
    } catch (const ObstructionDivergence& e) {
      CHECK(e.slope() == doctest::Approx(1.0).epsilon(0.05));
    }
    // No cycles at all: the linear focus only has the origin functional.
    try {
      solve_at(linear_focus(), {}, Rhs::constant(2), {1, 1});
      FAIL("expected divergence");
    } catch (const ObstructionDivergence& e) {
      CHECK(e.slope() == doctest::Approx(2.0).epsilon(0.05));
    }
  }

  TEST_CASE("grid solve gate and zero solution") {
    const GridSpec g = small_box();
    CHECK_THROWS_AS(solve_grid(van_der_pol(), vdp_cycles(), Rhs::constant(1), g), InadmissibleRhs);
    try {
      solve_grid(van_der_pol(), vdp_cycles(), Rhs::constant(1), g);
    } catch (const InadmissibleRhs& e) {
      CHECK_FALSE(e.report().admissible);
      CHECK(e.report().f_at_origin == 1.0);
    }
    const CohomSolution zero = solve_grid(van_der_pol(), vdp_cycles(), Rhs::zero(), g);
    for (std::size_t k = 0; k < zero.values.size(); ++k) {
      if (zero.status[k] == PointStatus::solved) CHECK(zero.values[k] == 0.0);
    }
    CHECK(zero.residual_max < 1e-8);
  }

  TEST_CASE("manufactured grid solve and residual") {
    const Rhs f(lie_derivative_poly(van_der_pol(), g_xy()));
    CohomologySolver solver(van_der_pol(), vdp_cycles(), f);
    solver.chain();
    const GridSpec g = small_box();
    const CohomSolution sol = solver.solve_grid(g);
    CHECK(sol.failed_count == 0);
    for (std::size_t k = 0; k < sol.values.size(); ++k) {
      const Point p = g.at(k % g.nx(), k / g.nx());
      if (sol.status[k] == PointStatus::solved) CHECK(std::abs(sol.values[k] - g_xy().eval(p.x, p.y)) < 1e-3);
      if (sol.status[k] != PointStatus::solved) CHECK(std::isnan(sol.values[k]));
    }
    CHECK(solver.verify_residual(sol, 200) <= 5e-3);

    // Kernel: shifting every constant shifts g and leaves the residual alone.
    const double before = solver.verify_residual(sol, 40);
    ChainResult shifted = solver.constants();
    for (double& c : shifted.constants) c += 2.5;
    CohomologySolver moved(van_der_pol(), vdp_cycles(), f);
    moved.set_constants(shifted);
    const CohomSolution sol2 = moved.solve_grid(g);
    for (std::size_t k = 0; k < sol.values.size(); ++k) {
      if (sol.status[k] == PointStatus::solved) CHECK(sol2.values[k] - sol.values[k] == doctest::Approx(2.5).epsilon(1e-9));
    }
    CHECK(moved.verify_residual(sol2, 40) == doctest::Approx(before).epsilon(1e-6));
  }

  TEST_CASE("halving the residual step quarters the truncation part") {
    const Rhs f(lie_derivative_poly(van_der_pol(), g_xy()));
    CohomologySolver solver(van_der_pol(), vdp_cycles(), f);
    solver.chain();
    const CohomSolution sol = solver.solve_grid({1.5, 3, 1.5, 3, 0.5});
    const double coarse = solver.verify_residual(sol, 10, 0.04);
    const double fine = solver.verify_residual(sol, 10, 0.02);
    CHECK(coarse / fine == doctest::Approx(4.0).epsilon(0.15));
  }

  TEST_CASE("cocycle identity along trajectories") {
    const FlowSettings s;
    const BiPoly g0 = g_xy();
    for (const auto* which : {"van_der_pol", "two_cycle"}) {
      const bool vdp = std::string(which) == "van_der_pol";
      const LienardField field = vdp ? van_der_pol() : two_cycle();
      const CycleSet& cs = vdp ? vdp_cycles() : two_cycles();
      const BiPoly Lg = lie_derivative_poly(field, g0);
      CohomologySolver solver(field, cs, Rhs(Lg));
      solver.chain();
      const ScalarFn integrand = [&Lg](Point p) { return Lg.eval(p.x, p.y); };
      std::mt19937_64 rng(23);
      std::uniform_real_distribution<double> coord(-2.5, 2.5);
      std::uniform_real_distribution<double> time(0.1, 5.0);
      for (int k = 0; k < 8; ++k) {
        const Point p{coord(rng), coord(rng)};
        if (solver.excluded(p)) continue;
        const double t = time(rng);
        const auto q = flow_with_quadrature(field, p, integrand, t, s);
        if (solver.excluded(q.end)) continue;
        CHECK(std::abs(solver.solve_at(q.end).value - solver.solve_at(p).value - q.integral) < 1e-4);
      }
    }
  }

  TEST_CASE("the uncorrected sign fails the residual test") {
    const Rhs f(lie_derivative_poly(van_der_pol(), g_xy()));
    SolverOptions paper;
    paper.paper_sign = true;
    CohomologySolver solver(van_der_pol(), vdp_cycles(), f, {}, paper);
    // The two matching probes already disagree.
    CHECK_THROWS_AS(solver.chain(), MatchFailure);
    solver.set_constants(chain_constants(van_der_pol(), vdp_cycles(), f));
    const CohomSolution sol = solver.solve_grid({2.5, 3.5, 2.5, 3.5, 0.5});
    CHECK(solver.verify_residual(sol, 9) > 1e-2);
  }

  TEST_CASE("exclusion tubes flag points next to a cycle") {
    const LimitCycle& c = two_cycles().cycles[0];
    CohomologySolver solver(two_cycle(), two_cycles(), Rhs::zero());
    CHECK(solver.excluded({0, c.section_y + 1e-10}));
    CHECK_FALSE(solver.excluded({0, 0.5 * c.section_y}));
  }
}
