#pragma once

#include <string>
#include <vector>

#include "lienard/field.hpp"

namespace lienard::testing {

inline UniPoly poly(std::initializer_list<Rational> coeffs) { return UniPoly(std::vector<Rational>(coeffs)); }

inline LienardField van_der_pol() { return LienardField(poly({0, -1, 0, Rational(1, 3)})); }
inline LienardField linear_focus() { return LienardField(poly({0, 1})); }
inline LienardField two_cycle() { return LienardField(poly({0, Rational(1, 2), 0, Rational(-5, 6), 0, Rational(1, 5)})); }
inline LienardField even_square() { return LienardField(poly({0, 0, 1})); }
inline LienardField even_quartic() { return LienardField(poly({0, 0, -2, 0, 1})); }

struct CorpusField {
  std::string name;
  LienardField field;
};

inline std::vector<CorpusField> corpus() {
  return {{"linear", linear_focus()},
          {"van_der_pol", van_der_pol()},
          {"two_cycle", two_cycle()},
          {"even_square", even_square()},
          {"even_quartic", even_quartic()}};
}

}  // namespace lienard::testing
