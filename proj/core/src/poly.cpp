#include "lienard/poly.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lienard {

// ---------------------------------------------------------------- UniPoly

UniPoly::UniPoly(std::vector<Rational> coefficients) : coeffs_(std::move(coefficients)) { strip(); }

UniPoly UniPoly::monomial(std::size_t degree, Rational c) {
  std::vector<Rational> coeffs(degree + 1);
  coeffs[degree] = std::move(c);
  return UniPoly(std::move(coeffs));
}

void UniPoly::strip() {
  while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
  fcoeffs_.resize(coeffs_.size());
  std::transform(coeffs_.begin(), coeffs_.end(), fcoeffs_.begin(),
                 [](const Rational& r) { return r.to_double(); });
}

Rational UniPoly::coefficient(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : Rational{}; }

bool UniPoly::is_even() const {
  for (std::size_t i = 1; i < coeffs_.size(); i += 2) {
    if (!coeffs_[i].is_zero()) return false;
  }
  return true;
}

bool UniPoly::is_odd() const {
  for (std::size_t i = 0; i < coeffs_.size(); i += 2) {
    if (!coeffs_[i].is_zero()) return false;
  }
  return true;
}

Rational UniPoly::eval(const Rational& x) const {
  Rational acc;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

double UniPoly::eval(double x) const {
  double acc = 0.0;
  for (auto it = fcoeffs_.rbegin(); it != fcoeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

UniPoly UniPoly::derivative() const {
  if (coeffs_.size() <= 1) return {};
  std::vector<Rational> d(coeffs_.size() - 1);
  for (std::size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = Rational(static_cast<long>(i)) * coeffs_[i];
  return UniPoly(std::move(d));
}

double UniPoly::max_real_root_magnitude() const {
  if (degree() < 1) return 0.0;
  // Cauchy bound on root magnitudes, then a sign-change scan refined by
  // bisection. Double roots are caught through sign changes of p'.
  const double lead = std::abs(fcoeffs_.back());
  double bound = 0.0;
  for (std::size_t i = 0; i + 1 < fcoeffs_.size(); ++i) bound = std::max(bound, std::abs(fcoeffs_[i]) / lead);
  bound += 1.0;

  const UniPoly dp = derivative();
  constexpr int kSamples = 20000;
  double best = coeffs_.front().is_zero() ? 0.0 : -1.0;
  auto refine = [](auto&& fn, double a, double b) {
    double fa = fn(a);
    for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, std::abs(a)); ++it) {
      const double m = 0.5 * (a + b);
      const double fm = fn(m);
      if ((fm <= 0) == (fa <= 0)) {
        a = m;
        fa = fm;
      } else {
        b = m;
      }
    }
    return 0.5 * (a + b);
  };
  const double step = 2.0 * bound / kSamples;
  double prev_x = -bound;
  double prev_p = eval(prev_x);
  double prev_dp = dp.eval(prev_x);
  for (int k = 1; k <= kSamples; ++k) {
    const double x = -bound + k * step;
    const double px = eval(x);
    const double dpx = dp.eval(x);
    if ((px <= 0) != (prev_p <= 0) || px == 0.0) {
      const double r = px == 0.0 ? x : refine([this](double t) { return eval(t); }, prev_x, x);
      best = std::max(best, std::abs(r));
    } else if ((dpx <= 0) != (prev_dp <= 0)) {
      const double c = refine([&dp](double t) { return dp.eval(t); }, prev_x, x);
      const double scale = std::max(1.0, std::abs(eval(0.0)) + lead * std::pow(std::abs(c) + 1.0, degree()));
      if (std::abs(eval(c)) < 1e-12 * scale) best = std::max(best, std::abs(c));
    }
    prev_x = x;
    prev_p = px;
    prev_dp = dpx;
  }
  return std::max(best, 0.0);
}

UniPoly operator+(const UniPoly& a, const UniPoly& b) {
  std::vector<Rational> c(std::max(a.coeffs_.size(), b.coeffs_.size()));
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coefficient(i) + b.coefficient(i);
  return UniPoly(std::move(c));
}

UniPoly operator-(const UniPoly& a, const UniPoly& b) { return a + Rational(-1) * b; }

UniPoly operator*(const UniPoly& a, const UniPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rational> c(a.coeffs_.size() + b.coeffs_.size() - 1);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
  }
  return UniPoly(std::move(c));
}

UniPoly operator*(const Rational& c, const UniPoly& p) {
  std::vector<Rational> out = p.coeffs_;
  for (auto& v : out) v *= c;
  return UniPoly(std::move(out));
}

std::string UniPoly::str() const {
  if (coeffs_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i].is_zero()) continue;
    if (!first) os << " + ";
    os << "(" << coeffs_[i] << ")";
    if (i >= 1) os << "*x";
    if (i >= 2) os << "^" << i;
    first = false;
  }
  return os.str();
}

// --------------------------------------------------------------- monomials

std::vector<Monomial> monomials_up_to(int d) {
  std::vector<Monomial> out;
  for (int deg = 0; deg <= d; ++deg) {
    for (int i = deg; i >= 0; --i) out.push_back({i, deg - i});
  }
  return out;
}

std::size_t graded_lex_index(const Monomial& m) {
  const auto deg = static_cast<std::size_t>(m.degree());
  return deg * (deg + 1) / 2 + static_cast<std::size_t>(m.j);
}

// ----------------------------------------------------------------- BiPoly

BiPoly::BiPoly(Terms terms) : terms_(std::move(terms)) {
  std::erase_if(terms_, [](const auto& kv) { return kv.second.is_zero(); });
  rebuild_cache();
}

BiPoly BiPoly::constant(Rational c) { return monomial(0, 0, std::move(c)); }

BiPoly BiPoly::monomial(int i, int j, Rational c) {
  Terms t;
  t.emplace(Monomial{i, j}, std::move(c));
  return BiPoly(std::move(t));
}

BiPoly BiPoly::from_x(const UniPoly& p) {
  Terms t;
  for (std::size_t i = 0; i < p.coefficients().size(); ++i) t.emplace(Monomial{static_cast<int>(i), 0}, p.coefficients()[i]);
  return BiPoly(std::move(t));
}

void BiPoly::rebuild_cache() {
  cache_.clear();
  max_i_ = max_j_ = 0;
  for (const auto& [m, c] : terms_) {
    cache_.push_back({m.i, m.j, c.to_double()});
    max_i_ = std::max(max_i_, m.i);
    max_j_ = std::max(max_j_, m.j);
  }
}

int BiPoly::total_degree() const {
  // GradedLex puts the highest degree last.
  return terms_.empty() ? -1 : terms_.rbegin()->first.degree();
}

Rational BiPoly::coefficient(const Monomial& m) const {
  const auto it = terms_.find(m);
  return it == terms_.end() ? Rational{} : it->second;
}

namespace {

// Powers 1, v, v^2, ... v^n in a small stack buffer when possible.
template <class Fn>
double with_powers(double x, double y, int max_i, int max_j, Fn&& fn) {
  constexpr int kStack = 32;
  double px_buf[kStack];
  double py_buf[kStack];
  std::vector<double> px_heap;
  std::vector<double> py_heap;
  double* px = px_buf;
  double* py = py_buf;
  if (max_i >= kStack) {
    px_heap.resize(max_i + 1);
    px = px_heap.data();
  }
  if (max_j >= kStack) {
    py_heap.resize(max_j + 1);
    py = py_heap.data();
  }
  px[0] = 1.0;
  for (int k = 1; k <= max_i; ++k) px[k] = px[k - 1] * x;
  py[0] = 1.0;
  for (int k = 1; k <= max_j; ++k) py[k] = py[k - 1] * y;
  return fn(px, py);
}

}  // namespace

double BiPoly::eval(double x, double y) const {
  if (cache_.empty()) return 0.0;
  return with_powers(x, y, max_i_, max_j_, [this](const double* px, const double* py) {
    double acc = 0.0;
    for (const auto& t : cache_) acc += t.c * px[t.i] * py[t.j];
    return acc;
  });
}

std::pair<double, double> BiPoly::gradient(double x, double y) const {
  double gx = 0.0;
  double gy = 0.0;
  if (cache_.empty()) return {gx, gy};
  with_powers(x, y, max_i_, max_j_, [&](const double* px, const double* py) {
    for (const auto& t : cache_) {
      if (t.i > 0) gx += t.c * t.i * px[t.i - 1] * py[t.j];
      if (t.j > 0) gy += t.c * t.j * px[t.i] * py[t.j - 1];
    }
    return 0.0;
  });
  return {gx, gy};
}

BiPoly BiPoly::dx() const {
  Terms t;
  for (const auto& [m, c] : terms_) {
    if (m.i > 0) t.emplace(Monomial{m.i - 1, m.j}, Rational(m.i) * c);
  }
  return BiPoly(std::move(t));
}

BiPoly BiPoly::dy() const {
  Terms t;
  for (const auto& [m, c] : terms_) {
    if (m.j > 0) t.emplace(Monomial{m.i, m.j - 1}, Rational(m.j) * c);
  }
  return BiPoly(std::move(t));
}

BiPoly& BiPoly::operator+=(const BiPoly& o) {
  for (const auto& [m, c] : o.terms_) {
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }
  rebuild_cache();
  return *this;
}

BiPoly& BiPoly::operator-=(const BiPoly& o) { return *this += Rational(-1) * o; }

BiPoly operator*(const BiPoly& a, const BiPoly& b) {
  BiPoly::Terms t;
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) t[Monomial{ma.i + mb.i, ma.j + mb.j}] += ca * cb;
  }
  return BiPoly(std::move(t));
}

BiPoly operator*(const Rational& c, const BiPoly& p) {
  if (c.is_zero()) return {};
  BiPoly::Terms t = p.terms_;
  for (auto& [m, v] : t) v *= c;
  return BiPoly(std::move(t));
}

bool operator==(const BiPoly& a, const BiPoly& b) { return a.terms_ == b.terms_; }

std::string BiPoly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c << ")";
    if (m.i > 0) os << "*x" << (m.i > 1 ? "^" + std::to_string(m.i) : "");
    if (m.j > 0) os << "*y" << (m.j > 1 ? "^" + std::to_string(m.j) : "");
  }
  return os.str();
}

}  // namespace lienard
