#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "lienard/rational.hpp"

namespace lienard {

/// Univariate polynomial with exact rational coefficients in ascending
/// degree. Trailing zeros are stripped; the zero polynomial has no
/// coefficients and degree -1.
class UniPoly {
 public:
  UniPoly() = default;
  explicit UniPoly(std::vector<Rational> coefficients);

  static UniPoly monomial(std::size_t degree, Rational c = 1);

  const std::vector<Rational>& coefficients() const { return coeffs_; }
  /// Coefficient of x^i, zero past the degree.
  Rational coefficient(std::size_t i) const;
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  bool is_even() const;
  bool is_odd() const;

  Rational eval(const Rational& x) const;
  /// Horner on float-converted coefficients.
  double eval(double x) const;
  UniPoly derivative() const;
  /// Largest |r| over real roots r, 0 when there are none.
  double max_real_root_magnitude() const;

  friend UniPoly operator+(const UniPoly& a, const UniPoly& b);
  friend UniPoly operator-(const UniPoly& a, const UniPoly& b);
  friend UniPoly operator*(const UniPoly& a, const UniPoly& b);
  friend UniPoly operator*(const Rational& c, const UniPoly& p);
  friend bool operator==(const UniPoly& a, const UniPoly& b) { return a.coeffs_ == b.coeffs_; }

  std::string str() const;

 private:
  void strip();

  std::vector<Rational> coeffs_;
  std::vector<double> fcoeffs_;
};

/// Exponent pair of x^i y^j.
struct Monomial {
  int i = 0;
  int j = 0;
  int degree() const { return i + j; }
  friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// Graded-lex order with x > y: lower total degree first, then larger x
/// exponent first. So 1, x, y, x^2, xy, y^2, ...
struct GradedLex {
  bool operator()(const Monomial& a, const Monomial& b) const {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    return a.i > b.i;
  }
};

/// All monomials of total degree <= d in graded-lex order.
std::vector<Monomial> monomials_up_to(int d);
/// Position of `m` in monomials_up_to(d) for any d >= m.degree().
std::size_t graded_lex_index(const Monomial& m);

/// Sparse bivariate polynomial over the rationals. Zero coefficients are
/// never stored; iteration follows GradedLex.
class BiPoly {
 public:
  using Terms = std::map<Monomial, Rational, GradedLex>;

  BiPoly() = default;
  explicit BiPoly(Terms terms);

  static BiPoly constant(Rational c);
  static BiPoly monomial(int i, int j, Rational c = 1);
  static BiPoly x() { return monomial(1, 0); }
  static BiPoly y() { return monomial(0, 1); }
  /// p(x) viewed as a polynomial in (x, y).
  static BiPoly from_x(const UniPoly& p);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// -1 for the zero polynomial.
  int total_degree() const;
  Rational coefficient(const Monomial& m) const;

  double eval(double x, double y) const;
  /// Gradient (d/dx, d/dy) in floating point.
  std::pair<double, double> gradient(double x, double y) const;

  BiPoly dx() const;
  BiPoly dy() const;

  BiPoly& operator+=(const BiPoly& o);
  BiPoly& operator-=(const BiPoly& o);
  friend BiPoly operator+(BiPoly a, const BiPoly& b) { return a += b; }
  friend BiPoly operator-(BiPoly a, const BiPoly& b) { return a -= b; }
  friend BiPoly operator*(const BiPoly& a, const BiPoly& b);
  friend BiPoly operator*(const Rational& c, const BiPoly& p);
  friend bool operator==(const BiPoly& a, const BiPoly& b);

  std::string str() const;

 private:
  struct FloatTerm {
    int i;
    int j;
    double c;
  };
  void rebuild_cache();

  Terms terms_;
  std::vector<FloatTerm> cache_;
  int max_i_ = 0;
  int max_j_ = 0;
};

}  // namespace lienard
