#include <doctest.h>

#include <cmath>
#include <random>

#include "corpus.hpp"
#include "lienard/center.hpp"
#include "lienard/errors.hpp"
#include "oracles.hpp"

using namespace lienard;
using namespace lienard::testing;

TEST_SUITE("center") {
  TEST_CASE("even decomposition") {
    const CenterDecomposition sq = decompose_even(even_square().F());
    CHECK(sq.K == poly({0, 1}));
    const CenterDecomposition qu = decompose_even(even_quartic().F());
    CHECK(qu.K == poly({0, -2, 1}));
    CHECK(qu.k == qu.K);
    CHECK_THROWS_AS(decompose_even(van_der_pol().F()), NotEven);
    CHECK_THROWS_AS(decompose_even(poly({0, 0, 1, 1})), NotEven);
  }

  TEST_CASE("decomposition round-trips through x^2") {
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<int> coeff(-5, 5);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<Rational> c(9);
      for (std::size_t k = 2; k < c.size(); k += 2) c[k] = coeff(rng);
      const UniPoly F(c);
      const UniPoly K = decompose_even(F).K;
      for (double x : {-1.3, 0.4, 2.0}) CHECK(K.eval(x * x) == doctest::Approx(F.eval(x)).epsilon(1e-12));
    }
  }

  TEST_CASE("a point on the parabola is its own first crossing") {
    const FlowSettings s;
    const Point p{0.7, -0.49};
    const ParabolaCrossings c = parabola_crossings(even_square(), p, s);
    CHECK(c.first == p);
    CHECK(c.first_value == doctest::Approx(0.49));
    CHECK(first_integral_parabola(even_square(), p, s) == doctest::Approx(0.49));
    CHECK_THROWS_AS(first_integral_parabola(even_square(), {0, 0}, s), ValidationFailure);
  }

  TEST_CASE("both first integrals are constant along orbits") {
    const FlowSettings s;
    for (const LienardField& f : {even_square(), even_quartic()}) {
      const CenterDecomposition d = decompose_even(f.F());
      for (double y0 : {0.3, 0.8}) {
        const Point p{0, y0};
        const double hp = first_integral_parabola(f, p, s);
        const double ht = first_integral_transformed(d, p, s);
        for (double t : {0.4, 1.3, 2.9, 4.4}) {
          const Point q = flow(f, p, t, s);
          CHECK(std::abs(first_integral_parabola(f, q, s) - hp) <= 1e-8 * std::abs(hp));
          CHECK(std::abs(first_integral_transformed(d, q, s) - ht) <= 1e-8 * std::abs(ht));
        }
      }
    }
  }

  TEST_CASE("first integrals separate distinct orbits") {
    const FlowSettings s;
    const CenterDecomposition d = decompose_even(even_square().F());
    double prev_p = -1;
    double prev_t = -1;
    for (int k = 0; k < 20; ++k) {
      const Point p{0, 0.2 + 0.09 * k};
      const double hp = first_integral_parabola(even_square(), p, s);
      const double ht = first_integral_transformed(d, p, s);
      if (k > 0) {
        CHECK(std::abs(hp - prev_p) > 1e-4);
        CHECK(std::abs(ht - prev_t) > 1e-4);
      }
      prev_p = hp;
      prev_t = ht;
    }
  }

  TEST_CASE("center report on an even field") {
    const CenterReport r = verify_center(even_square(), {}, {});
    REQUIRE(r.orbits.size() == 10);
    CHECK(r.max_displacement < 1e-8);
    CHECK(r.max_parabola_spread <= 1e-8);
    CHECK(r.max_transformed_spread <= 1e-8);
    CHECK(r.parabola_monotone);
    CHECK(r.transformed_monotone);
    std::vector<double> s;
    std::vector<double> hp;
    std::vector<double> ht;
    for (const auto& o : r.orbits) {
      s.push_back(o.s);
      hp.push_back(o.parabola);
      ht.push_back(o.transformed);
      CHECK(o.crossing_gap < 1e-8);
    }
    CHECK(rank_correlation(s, hp) == doctest::Approx(1.0));
    CHECK(rank_correlation(s, ht) == doctest::Approx(1.0));
  }

  TEST_CASE("non-centers are rejected") {
    CHECK_THROWS_AS(verify_center(van_der_pol(), {}, {}), CenterViolation);
    CHECK_THROWS_AS(verify_center(linear_focus(), {}, {}), CenterViolation);
    try {
      verify_center(van_der_pol(), {}, {});
    } catch (const CenterViolation& e) {
      CHECK(std::string(e.what()).find("does not close") != std::string::npos);
    }
  }
}
