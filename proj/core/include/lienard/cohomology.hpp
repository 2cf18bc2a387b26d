#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lienard/cycles.hpp"
#include "lienard/obstruction.hpp"
#include "lienard/rhs.hpp"

namespace lienard {

/// An invariant set bounding a region: the origin, a cycle, or infinity.
struct LimitSet {
  enum class Kind { origin, cycle, infinity };
  Kind kind = Kind::origin;
  /// 1-based nesting index when kind == cycle.
  int cycle_index = 0;

  /// Position in the ordering origin = 0, cycles 1..n, infinity = n + 1.
  int ordinal(std::size_t n) const;
  static LimitSet from_ordinal(int ordinal, std::size_t n);
  std::string str() const;
  friend bool operator==(const LimitSet&, const LimitSet&) = default;
};

enum class RegionKind { inner_disk, annulus, exterior };

/// Which component of the plane minus the cycles a point lies in, and the
/// limit sets of its orbits in both time directions.
struct RegionLabel {
  RegionKind kind = RegionKind::inner_disk;
  /// i for the annulus between cycle i and cycle i + 1; 0 otherwise.
  int annulus_index = 0;
  LimitSet forward_limit;
  LimitSet backward_limit;
  /// True when the solver integrates towards backward_limit (the forward
  /// limit is infinity); false when it follows forward_limit.
  bool solver_uses_backward = false;

  const LimitSet& solver_limit() const { return solver_uses_backward ? backward_limit : forward_limit; }
  std::string str() const;
};

/// Asymptotic phase of a point relative to an attracting cycle.
struct PhaseResult {
  Point x_star;
  /// Forward time from the cycle's section point to x_star under the field
  /// the phase was computed for, in [0, T).
  double phase_time = 0.0;
  int iterations = 0;
  /// Distance between the last two period-map iterates.
  double residual = 0.0;
  /// Ratio of successive iterate distances while still far from the noise
  /// floor; approaches the cycle multiplier. 0 when unavailable.
  double convergence_ratio = 0.0;
};

struct SolverOptions {
  /// A cycle integral stops once one period adds less than this.
  double increment_tol = 1e-11;
  /// Target truncation error of the origin integral.
  double origin_tail_tol = 1e-10;
  int max_periods = 200;
  /// Divergence threshold: per unit time for the origin, per period
  /// (scaled by T) for cycles.
  double obstruction_tol = 1e-6;
  double match_tol = 1e-3;
  /// Pointwise error budget behind the exclusion tubes.
  double tube_tol = 1e-4;
  /// Longest acceptable time to leave the neighbourhood of a
  /// non-attracting boundary before a point is excluded.
  double escape_time_cap = 200.0;
  /// Inside this distance (in section coordinate) of any cycle a point is
  /// always excluded.
  double cycle_clearance = 1e-9;
  int trace_points = 256;
  /// Fractions of the gap at which the matching probes sit.
  double probe_fraction = 0.1;
  double second_probe_fraction = 0.15;
  /// Debug: use g(x*) + integral instead of g(x*) - integral.
  bool paper_sign = false;
  /// Solve even when the right-hand side is inadmissible.
  bool force = false;
  unsigned threads = 0;
};

struct SolveValue {
  double value = 0.0;
  double error_bound = 0.0;
};

struct ChainResult {
  /// Additive constant per boundary set: [origin, cycle 1, ..., cycle n].
  std::vector<double> constants;
  /// Per cycle, the spread between the constants implied by two probes.
  std::vector<double> discrepancies;
};

/// Rectangular lattice x_min + i h, y_min + j h.
struct GridSpec {
  double x_min = -4, x_max = 4, y_min = -4, y_max = 4, h = 0.05;
  std::size_t nx() const;
  std::size_t ny() const;
  Point at(std::size_t ix, std::size_t iy) const;
};

enum class PointStatus : std::uint8_t { solved = 0, excluded = 1, failed = 2 };

struct CohomSolution {
  GridSpec grid;
  /// Row-major (iy * nx + ix); NaN where not solved.
  std::vector<double> values;
  std::vector<PointStatus> status;
  std::vector<RegionLabel> labels;
  std::vector<double> truncation_error;
  ChainResult chain;
  /// Filled by verify_residual.
  double residual_max = 0.0;
  std::size_t excluded_count = 0;
  std::size_t failed_count = 0;
  /// Failure kind per failed point index.
  std::vector<std::pair<std::size_t, std::string>> failures;
  /// Mean fitted slope over points that failed with ObstructionDivergence.
  std::optional<double> divergence_slope;
  /// Set when chaining failed under force.
  std::optional<std::string> chain_failure;
};

/// Solves L.g = f pointwise. Construction precomputes cycle traces and the
/// loop integrals of f; chain() fixes the per-set constants with g(0) = 0.
class CohomologySolver {
 public:
  CohomologySolver(LienardField field, CycleSet cycles, Rhs f, FlowSettings settings = {},
                   SolverOptions options = {});

  const LienardField& field() const { return field_; }
  const CycleSet& cycles() const { return cycles_; }
  const Rhs& rhs() const { return f_; }
  const SolverOptions& options() const { return options_; }
  const FlowSettings& settings() const { return settings_; }

  RegionLabel classify(Point p) const;

  /// Asymptotic phase w.r.t. cycle `cycle_index` (1-based) under the field
  /// with the given time direction; the cycle must attract in that direction.
  PhaseResult asymptotic_phase(int cycle_index, Point p, int direction = 1) const;

  /// Compute and store the chained constants. Throws MatchFailure when the
  /// two probes disagree by more than match_tol.
  const ChainResult& chain();
  /// Install constants directly (e.g. shifted by a kernel element).
  void set_constants(ChainResult chain);
  const ChainResult& constants() const { return chain_; }

  /// g(p). Throws ObstructionDivergence when the partial sums grow linearly.
  SolveValue solve_at(Point p) const;

  /// Whether solve_grid would exclude p, with the label it computed.
  bool excluded(Point p, RegionLabel* label = nullptr) const;

  /// The integral formula for a single boundary set without its constant:
  /// `set` is 0 for the origin or a 1-based cycle index.
  SolveValue set_formula(int set, Point p) const;

  CohomSolution solve_grid(const GridSpec& grid) const;

  /// Max over `sample_count` random solved grid points of
  /// |(g(phi_h p) - g(phi_-h p)) / 2h - f(p)|, g re-solved at both points.
  double verify_residual(const CohomSolution& solution, int sample_count, double h = 1e-4,
                         std::uint64_t seed = 20240611) const;

  /// Linear decay rate of the origin under the attracting time direction.
  double origin_rate() const;

 private:
  struct Classified {
    RegionLabel label;
    double section = 0.0;
  };
  struct CycleData {
    std::vector<Point> trace;
    std::vector<double> times;
    std::vector<double> cumulative;  // integral of f from the section point
    double loop_integral = 0.0;
    double drift = 0.0;
  };

  Classified classify_full(Point p) const;
  RegionLabel label_for_region(int region, double section) const;
  bool is_excluded(const Classified& c) const;
  SolveValue origin_formula(int direction, Point p) const;
  SolveValue cycle_formula(int cycle_index, int direction, Point p) const;
  /// Forward phase time of a point on cycle i (1-based) and the projected point.
  std::pair<double, Point> project_to_cycle(int cycle_index, Point target) const;
  double cycle_position_integral(int cycle_index, double tau) const;
  Stability set_stability(int ordinal) const;

  LienardField field_;
  CycleSet cycles_;
  Rhs f_;
  FlowSettings settings_;
  SolverOptions options_;
  std::vector<CycleData> data_;
  ChainResult chain_;
};

// Free-function entry points mirroring the module's operations.

RegionLabel classify_region(const LienardField& field, const CycleSet& cycles, Point p,
                            const FlowSettings& settings = {});

/// `field` may be reversed; the cycle must attract under it.
PhaseResult asymptotic_phase(const LienardField& field, const CycleSet& cycles, int cycle_index, Point p,
                             const FlowSettings& settings = {});

SolveValue solve_at(const LienardField& field, const CycleSet& cycles, const Rhs& f, Point p,
                    const FlowSettings& settings = {}, const SolverOptions& options = {});

ChainResult chain_constants(const LienardField& field, const CycleSet& cycles, const Rhs& f,
                            const FlowSettings& settings = {}, const SolverOptions& options = {});

/// Gated grid solve: throws InadmissibleRhs with the report unless
/// admissible or options.force.
CohomSolution solve_grid(const LienardField& field, const CycleSet& cycles, const Rhs& f, const GridSpec& grid,
                         const FlowSettings& settings = {}, const SolverOptions& options = {});

class InadmissibleRhs : public Error {
 public:
  explicit InadmissibleRhs(ObstructionReport report)
      : Error("InadmissibleRhs", ErrorCategory::obstruction, "right-hand side violates an obstruction functional"),
        report_(std::move(report)) {}
  const ObstructionReport& report() const { return report_; }

 private:
  ObstructionReport report_;
};

}  // namespace lienard
