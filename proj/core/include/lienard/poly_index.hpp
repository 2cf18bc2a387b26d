#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "lienard/cycles.hpp"
#include "lienard/field.hpp"
#include "lienard/rhs.hpp"

namespace lienard {

/// Matrix of g -> L.g from P_{d_in} to P_{d_out} in graded-lex bases.
struct OperatorMatrix {
  int d_in = 0;
  int d_out = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Monomial> row_basis;
  std::vector<Monomial> col_basis;
  /// Nonzero entries keyed by (row, col).
  std::map<std::pair<std::size_t, std::size_t>, Rational> entries;

  Rational at(std::size_t r, std::size_t c) const;
  std::vector<std::vector<Rational>> dense() const;
};

/// d_out = d_in + max(deg F - 1, 0).
int target_degree(const PolyVectorField& field, int d_in);

OperatorMatrix build_matrix(const PolyVectorField& field, int d_in);
OperatorMatrix build_matrix(const LienardField& field, int d_in);

struct RankResult {
  std::size_t rank = 0;
  /// Kernel basis in column coordinates, one vector per free column.
  std::vector<std::vector<Rational>> kernel;
};

/// Fraction-free (Bareiss) elimination over big integers after clearing
/// denominators column by column.
RankResult exact_rank(const std::vector<std::vector<Rational>>& matrix, std::size_t cols);
RankResult exact_rank(const OperatorMatrix& matrix);

struct IndexReport {
  int d_in = 0;
  int d_out = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t rank = 0;
  std::size_t kernel_dim = 0;
  std::size_t cokernel_dim = 0;
  long index = 0;
  std::vector<BiPoly> kernel_basis;
  double millis = 0.0;
};

/// Rank data for one truncation; every kernel element is checked to map to
/// the zero polynomial exactly.
IndexReport index_report(const LienardField& field, int d_in);

constexpr int kDefaultSweepCap = 16;

/// Reports for d_in = 0..d_max, computed concurrently. Throws
/// ResourceCapExceeded when d_max > cap.
std::vector<IndexReport> index_sweep(const LienardField& field, int d_max, int cap = kDefaultSweepCap,
                                     unsigned threads = 0);

/// Fixed-width text table. Timings are omitted when `with_timings` is false.
std::string sweep_table(const std::vector<IndexReport>& sweep, bool with_timings = true);

struct CokernelGram {
  /// G[i][j] = loop integral of h^j over cycle i + 1.
  std::vector<std::vector<double>> matrix;
  double determinant = 0.0;
  /// |det G| / product of row norms.
  double margin = 0.0;
  bool nonsingular = false;
};

/// Gram-type matrix of the functionals 1, h, ..., h^{n-1} against the
/// cycles. Throws SeparationFailure when two rows are proportional.
CokernelGram cokernel_gram(const LienardField& field, const CycleSet& cycles, const Rhs& h,
                           const FlowSettings& settings = {}, double threshold = 1e-8);

}  // namespace lienard
