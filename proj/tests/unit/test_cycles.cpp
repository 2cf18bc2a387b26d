#include <doctest.h>

#include <cmath>

#include "coefficient_scan.hpp"
#include "corpus.hpp"
#include "lienard/cycles.hpp"
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

void check_alternation(const CycleSet& cs) {
  Stability expected = opposite(cs.origin_stability);
  for (const auto& c : cs.cycles) {
    CHECK(c.stability == expected);
    CHECK((c.stability == Stability::attracting) == (c.multiplier < 1.0));
    expected = opposite(expected);
  }
}

}  // namespace

TEST_SUITE("cycles") {
  TEST_CASE("return map direction on van der Pol") {
    const FlowSettings s;
    CHECK(return_map(van_der_pol(), 1.0, s).next > 1.0);
    CHECK(return_map(van_der_pol(), 4.0, s).next < 4.0);
    const LimitCycle& c = vdp_cycles().cycles.at(0);
    CHECK(std::abs(return_map(van_der_pol(), c.section_y, s).next - c.section_y) < 1e-9);
  }

  TEST_CASE("linear focus has no cycles and an attracting origin") {
    const CycleSet cs = find_cycles(linear_focus(), {}, {});
    CHECK(cs.count() == 0);
    CHECK(cs.origin_stability == Stability::attracting);
  }

  TEST_CASE("van der Pol has one attracting cycle around a repelling origin") {
    const CycleSet& cs = vdp_cycles();
    REQUIRE(cs.count() == 1);
    CHECK(cs.origin_stability == Stability::repelling);
    CHECK(cs.cycles[0].stability == Stability::attracting);
    CHECK(cs.cycles[0].multiplier > 0.0);
    CHECK(cs.cycles[0].multiplier < 1.0);
    CHECK(cs.cycles[0].nesting_index == 1);
  }

  TEST_CASE("van der Pol period and multiplier against a shooting oracle") {
    const LimitCycle& c = vdp_cycles().cycles.at(0);
    const ShootingOrbit o = shooting_orbit(van_der_pol(), c.section_y, c.period);
    REQUIRE(o.converged);
    CHECK(std::abs(c.section_y - o.s) / o.s < 1e-8);
    CHECK(std::abs(c.period - o.period) / o.period < 1e-8);
    CHECK(std::abs(c.multiplier - o.multiplier) / o.multiplier < 1e-6);
  }

  TEST_CASE("multiplier estimates agree across the finite-difference sweep") {
    const LimitCycle& c = vdp_cycles().cycles.at(0);
    const MultiplierEstimate e = multiplier_estimates(van_der_pol(), c.section_y, c.period, {});
    CHECK(e.relative_gap < 1e-4);
    for (double v : e.sweep) CHECK(std::abs(v - e.from_divergence) / e.from_divergence < 1e-3);
    CHECK(multiplier(van_der_pol(), c, {}) == doctest::Approx(c.multiplier).epsilon(1e-12));
  }

  TEST_CASE("two-cycle field alternates stabilities") {
    const CycleSet& cs = two_cycles();
    REQUIRE(cs.count() == 2);
    CHECK(cs.origin_stability == Stability::attracting);
    CHECK(cs.cycles[0].stability == Stability::repelling);
    CHECK(cs.cycles[1].stability == Stability::attracting);
    CHECK(cs.cycles[0].section_y < cs.cycles[1].section_y);
    check_alternation(cs);
    check_alternation(vdp_cycles());
  }

  TEST_CASE("two-cycle multipliers against the shooting oracle") {
    for (const auto& c : two_cycles().cycles) {
      const ShootingOrbit o = shooting_orbit(two_cycle(), c.section_y, c.period);
      REQUIRE(o.converged);
      CHECK(std::abs(c.period - o.period) / o.period < 1e-8);
      CHECK(std::abs(c.multiplier - o.multiplier) / o.multiplier < 1e-6);
    }
  }

  TEST_CASE("reversed field mirrors the cycle set") {
    for (const CycleSet* cs : {&vdp_cycles(), &two_cycles()}) {
      const LienardField f = cs == &vdp_cycles() ? van_der_pol() : two_cycle();
      const CycleSet rev = find_cycles(f.reversed(), {}, {});
      REQUIRE(rev.count() == cs->count());
      CHECK(rev.origin_stability == opposite(cs->origin_stability));
      for (std::size_t k = 0; k < rev.count(); ++k) {
        CHECK(std::abs(rev.cycles[k].section_y - cs->cycles[k].section_y) < 1e-8);
        CHECK(rev.cycles[k].stability == opposite(cs->cycles[k].stability));
        CHECK(rev.cycles[k].multiplier * cs->cycles[k].multiplier == doctest::Approx(1.0).epsilon(1e-6));
      }
    }
  }

  TEST_CASE("refining the scan finds nothing new") {
    CycleSearchOptions fine;
    fine.samples = 2048;
    CHECK(find_cycles(van_der_pol(), fine, {}).count() == 1);
    CHECK(find_cycles(two_cycle(), fine, {}).count() == 2);
    CHECK(find_cycles(linear_focus(), fine, {}).count() == 0);
  }

  TEST_CASE("pathway failures are validation errors") {
    CHECK_THROWS_AS(find_cycles(even_square(), {}, {}), ValidationFailure);
    CHECK_THROWS_AS(find_cycles(LienardField(UniPoly({0, 0, 0, 1})), {}, {}), ValidationFailure);
  }

  TEST_CASE("cycle points parameterize the orbit uniformly in time") {
    const FlowSettings s;
    const LimitCycle& c = vdp_cycles().cycles.at(0);
    const int m = 16;
    const auto pts = cycle_points(van_der_pol(), c, m, s);
    REQUIRE(pts.size() == static_cast<std::size_t>(m));
    CHECK(pts[0] == Point{0.0, c.section_y});
    for (int k = 0; k + 1 < m; ++k) CHECK(norm(flow(van_der_pol(), pts[k], c.period / m, s) - pts[k + 1]) < 1e-8);
    CHECK(norm(flow(van_der_pol(), pts[m - 1], c.period / m, s) - pts[0]) < 1e-7);
    CHECK_THROWS(cycle_points(van_der_pol(), c, 4, s));
  }

  TEST_CASE("scan grid shape") {
    const auto g = scan_grid(1e-3, 6.0, 512);
    REQUIRE(g.size() == 512);
    CHECK(g.front() == doctest::Approx(1e-3));
    CHECK(g.back() == doctest::Approx(6.0));
    for (std::size_t k = 1; k < g.size(); ++k) CHECK(g[k] > g[k - 1]);
    CHECK(default_scan_limit(van_der_pol().F()) == doctest::Approx(2 + 2 * std::sqrt(3.0)).epsilon(1e-9));
  }

  TEST_CASE("coefficient scan harness locates the two-cycle field") {
    const auto found = find_two_cycle_field();
    REQUIRE(found.has_value());
    CHECK(found->candidate.F == two_cycle().F());
    CHECK(found->cycles.count() == 2);
  }
}
