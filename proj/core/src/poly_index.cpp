#include "lienard/poly_index.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <gmpxx.h>

#include "lienard/errors.hpp"
#include "lienard/parallel.hpp"

namespace lienard {

Rational OperatorMatrix::at(std::size_t r, std::size_t c) const {
  const auto it = entries.find({r, c});
  return it == entries.end() ? Rational(0) : it->second;
}

std::vector<std::vector<Rational>> OperatorMatrix::dense() const {
  std::vector<std::vector<Rational>> out(rows, std::vector<Rational>(cols));
  for (const auto& [rc, v] : entries) out[rc.first][rc.second] = v;
  return out;
}

int target_degree(const PolyVectorField& field, int d_in) { return d_in + std::max(field.degree() - 1, 0); }

OperatorMatrix build_matrix(const PolyVectorField& field, int d_in) {
  if (d_in < 0) throw ValidationFailure("d_in must be nonnegative");
  OperatorMatrix m;
  m.d_in = d_in;
  m.d_out = target_degree(field, d_in);
  m.col_basis = monomials_up_to(d_in);
  m.row_basis = monomials_up_to(m.d_out);
  m.rows = m.row_basis.size();
  m.cols = m.col_basis.size();
  std::vector<BiPoly> images(m.cols);
  parallel_for(m.cols, 0, [&](std::size_t c) {
    const Monomial& mono = m.col_basis[c];
    images[c] = lie_derivative_poly(field, BiPoly::monomial(mono.i, mono.j));
  });
  for (std::size_t c = 0; c < m.cols; ++c) {
    for (const auto& [mono, coeff] : images[c].terms()) {
      const std::size_t r = graded_lex_index(mono);
      if (r >= m.rows) throw std::logic_error("image exceeds the target degree");
      m.entries.emplace(std::make_pair(r, c), coeff);
    }
  }
  return m;
}

OperatorMatrix build_matrix(const LienardField& field, int d_in) {
  return build_matrix(PolyVectorField::from(field), d_in);
}

RankResult exact_rank(const std::vector<std::vector<Rational>>& matrix, std::size_t cols) {
  const std::size_t rows = matrix.size();
  // Clear denominators column by column: A = M * diag(1 / scale).
  std::vector<mpz_class> scale(cols, 1);
  for (std::size_t c = 0; c < cols; ++c) {
    for (std::size_t r = 0; r < rows; ++r) {
      if (!matrix[r][c].is_zero()) mpz_lcm(scale[c].get_mpz_t(), scale[c].get_mpz_t(), matrix[r][c].denominator().get_mpz_t());
    }
  }
  std::vector<std::vector<mpz_class>> a(rows, std::vector<mpz_class>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const Rational& v = matrix[r][c];
      if (!v.is_zero()) a[r][c] = v.numerator() * (scale[c] / v.denominator());
    }
  }

  std::vector<std::size_t> pivot_cols;
  mpz_class prev = 1;
  std::size_t row = 0;
  for (std::size_t c = 0; c < cols && row < rows; ++c) {
    std::size_t best = rows;
    for (std::size_t r = row; r < rows; ++r) {
      if (sgn(a[r][c]) != 0 && (best == rows || mpz_cmpabs(a[r][c].get_mpz_t(), a[best][c].get_mpz_t()) > 0)) best = r;
    }
    if (best == rows) continue;
    std::swap(a[row], a[best]);
    const mpz_class& p = a[row][c];
    for (std::size_t r = row + 1; r < rows; ++r) {
      const mpz_class lead = a[r][c];
      for (std::size_t j = c + 1; j < cols; ++j) {
        mpz_class v = p * a[r][j] - lead * a[row][j];
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        a[r][j] = std::move(v);
      }
      a[r][c] = 0;
    }
    prev = p;
    pivot_cols.push_back(c);
    ++row;
  }

  RankResult out;
  out.rank = pivot_cols.size();
  std::vector<bool> is_pivot(cols, false);
  for (std::size_t c : pivot_cols) is_pivot[c] = true;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<mpq_class> w(cols, 0);
    w[free] = 1;
    for (std::size_t k = pivot_cols.size(); k-- > 0;) {
      const std::size_t c = pivot_cols[k];
      mpq_class s = 0;
      for (std::size_t j = c + 1; j < cols; ++j) {
        if (sgn(w[j]) != 0 && sgn(a[k][j]) != 0) s += mpq_class(a[k][j]) * w[j];
      }
      w[c] = -s / mpq_class(a[k][c]);
    }
    // Undo the column scaling: M v = 0 with v_c = w_c * scale_c.
    std::vector<Rational> v(cols);
    for (std::size_t c = 0; c < cols; ++c) {
      mpq_class q = w[c] * mpq_class(scale[c]);
      q.canonicalize();
      v[c] = Rational(q);
    }
    out.kernel.push_back(std::move(v));
  }
  return out;
}

RankResult exact_rank(const OperatorMatrix& matrix) { return exact_rank(matrix.dense(), matrix.cols); }

IndexReport index_report(const LienardField& field, int d_in) {
  const auto start = std::chrono::steady_clock::now();
  const PolyVectorField vf = PolyVectorField::from(field);
  const OperatorMatrix m = build_matrix(vf, d_in);
  const RankResult rr = exact_rank(m);
  IndexReport report;
  report.d_in = d_in;
  report.d_out = m.d_out;
  report.rows = m.rows;
  report.cols = m.cols;
  report.rank = rr.rank;
  report.kernel_dim = m.cols - rr.rank;
  report.cokernel_dim = m.rows - rr.rank;
  report.index = static_cast<long>(report.kernel_dim) - static_cast<long>(report.cokernel_dim);
  for (const auto& v : rr.kernel) {
    BiPoly g;
    for (std::size_t c = 0; c < m.cols; ++c) {
      if (!v[c].is_zero()) g += BiPoly::monomial(m.col_basis[c].i, m.col_basis[c].j, v[c]);
    }
    if (!lie_derivative_poly(vf, g).is_zero()) throw std::logic_error("kernel element does not map to zero");
    report.kernel_basis.push_back(std::move(g));
  }
  if (report.rank + report.kernel_dim != report.cols || report.kernel_basis.size() != report.kernel_dim) {
    throw std::logic_error("rank-nullity mismatch");
  }
  report.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::vector<IndexReport> index_sweep(const LienardField& field, int d_max, int cap, unsigned threads) {
  if (d_max < 0) throw ValidationFailure("max degree must be nonnegative");
  if (d_max > cap) {
    throw ResourceCapExceeded("max degree " + std::to_string(d_max) + " exceeds the cap of " + std::to_string(cap));
  }
  std::vector<IndexReport> out(static_cast<std::size_t>(d_max) + 1);
  // Largest truncations first so the slowest job is not scheduled last.
  parallel_for(out.size(), threads, [&](std::size_t k) {
    const int d = d_max - static_cast<int>(k);
    out[static_cast<std::size_t>(d)] = index_report(field, d);
  });
  return out;
}

std::string sweep_table(const std::vector<IndexReport>& sweep, bool with_timings) {
  std::ostringstream os;
  os << std::setw(5) << "d_in" << std::setw(7) << "d_out" << std::setw(7) << "rows" << std::setw(7) << "cols"
     << std::setw(7) << "rank" << std::setw(8) << "kernel" << std::setw(10) << "cokernel" << std::setw(7) << "index";
  if (with_timings) os << std::setw(12) << "millis";
  os << '\n';
  for (const auto& r : sweep) {
    os << std::setw(5) << r.d_in << std::setw(7) << r.d_out << std::setw(7) << r.rows << std::setw(7) << r.cols
       << std::setw(7) << r.rank << std::setw(8) << r.kernel_dim << std::setw(10) << r.cokernel_dim << std::setw(7)
       << r.index;
    if (with_timings) os << std::setw(12) << std::fixed << std::setprecision(2) << r.millis;
    os << '\n';
  }
  return os.str();
}

namespace {

double determinant(std::vector<std::vector<double>> a) {
  const std::size_t n = a.size();
  double det = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
    }
    if (a[p][c] == 0.0) return 0.0;
    if (p != c) {
      std::swap(a[p], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      const double factor = a[r][c] / a[c][c];
      for (std::size_t j = c; j < n; ++j) a[r][j] -= factor * a[c][j];
    }
  }
  return det;
}

double row_norm(const std::vector<double>& row) {
  double s = 0.0;
  for (double v : row) s += v * v;
  return std::sqrt(s);
}

}  // namespace

CokernelGram cokernel_gram(const LienardField& field, const CycleSet& cycles, const Rhs& h,
                           const FlowSettings& settings, double threshold) {
  const std::size_t n = cycles.count();
  CokernelGram out;
  out.matrix.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    const LimitCycle& c = cycles.cycles[i];
    for (std::size_t j = 0; j < n; ++j) {
      const ScalarFn integrand = [&h, j](Point p) { return std::pow(h(p), static_cast<double>(j)); };
      out.matrix[i][j] = flow_with_quadrature(field, {0.0, c.section_y}, integrand, c.period, settings).integral;
    }
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      double ab = 0.0;
      for (std::size_t j = 0; j < n; ++j) ab += out.matrix[a][j] * out.matrix[b][j];
      const double cosine = std::abs(ab) / (row_norm(out.matrix[a]) * row_norm(out.matrix[b]));
      if (1.0 - cosine < threshold) {
        std::ostringstream msg;
        msg << "rows for cycles " << a + 1 << " and " << b + 1 << " are proportional: h does not separate them";
        throw SeparationFailure(msg.str());
      }
    }
  }
  out.determinant = determinant(out.matrix);
  double norms = 1.0;
  for (const auto& row : out.matrix) norms *= row_norm(row);
  out.margin = norms > 0.0 ? std::abs(out.determinant) / norms : 0.0;
  out.nonsingular = out.margin > threshold;
  return out;
}

}  // namespace lienard
