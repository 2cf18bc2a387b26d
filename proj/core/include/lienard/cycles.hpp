#pragma once

#include <array>
#include <string>
#include <vector>

#include "lienard/field.hpp"
#include "lienard/flow.hpp"

namespace lienard {

enum class Stability { attracting, repelling };

std::string to_string(Stability s);
Stability opposite(Stability s);

/// A hyperbolic limit cycle, identified by where it crosses the positive
/// y-axis.
struct LimitCycle {
  double section_y = 0.0;
  double period = 0.0;
  /// Nontrivial Floquet multiplier, exp of the divergence integral.
  double multiplier = 1.0;
  Stability stability = Stability::attracting;
  /// 1 = innermost.
  int nesting_index = 1;
  /// Central finite-difference R'(section_y), the independent estimate.
  double fd_multiplier = 0.0;
  /// |R(section_y) - section_y| at certification.
  double fixed_point_residual = 0.0;
};

/// All cycles found on the section, innermost first.
struct CycleSet {
  std::vector<LimitCycle> cycles;
  Stability origin_stability = Stability::attracting;

  std::size_t count() const { return cycles.size(); }
  /// Stability of the region past the outermost cycle ("infinity").
  Stability infinity_stability() const;
};

struct ReturnResult {
  double next = 0.0;
  double return_time = 0.0;
};

/// First return of (0, s) to the positive y-axis.
ReturnResult return_map(const LienardField& field, double s, const FlowSettings& settings);

struct CycleSearchOptions {
  /// Upper end of the scan; <= 0 selects default_scan_limit(F).
  double s_max = 0.0;
  /// Lower end of the geometric part of the grid.
  double s_min = 1e-3;
  int samples = 512;
  double refine_tol = 1e-10;
  /// Certificate threshold on |log multiplier|.
  double hyperbolicity_margin = 1e-6;
  /// Allowed relative gap between the two multiplier estimates.
  double cross_check_tol = 1e-4;
  unsigned threads = 0;
};

/// 2 + twice the largest real root magnitude of F.
double default_scan_limit(const UniPoly& F);

/// Geometric samples up to 1 (a quarter of the budget) then uniform to
/// s_max; purely geometric when s_max <= 1.
std::vector<double> scan_grid(double s_min, double s_max, int samples);

struct DisplacementSample {
  double s = 0.0;
  /// R(s) - s; -s when the orbit collapsed onto the origin, +inf on escape.
  double displacement = 0.0;
};

std::vector<DisplacementSample> displacement_scan(const LienardField& field, const std::vector<double>& grid,
                                                  const FlowSettings& settings, unsigned threads = 0);

/// Locate, refine and certify every cycle crossing (s_min, s_max].
/// Throws ValidationFailure when the field fails the pathway check and
/// SuspectedNonHyperbolic when a root has |log multiplier| <= margin.
CycleSet find_cycles(const LienardField& field, const CycleSearchOptions& options, const FlowSettings& settings);

struct MultiplierEstimate {
  double from_divergence = 0.0;
  double finite_difference = 0.0;
  double fd_step = 0.0;
  /// R'(s*) for steps 1e-4, 1e-5, 1e-6 (relative to max(1, s*)).
  std::array<double, 3> sweep{};
  double relative_gap = 0.0;
};

MultiplierEstimate multiplier_estimates(const LienardField& field, double section_y, double period,
                                        const FlowSettings& settings);

/// exp of the divergence integral over one period, after cross-checking it
/// against the return-map derivative. Throws CrossCheckFailure when the
/// relative gap exceeds `tolerance`.
double multiplier(const LienardField& field, const LimitCycle& cycle, const FlowSettings& settings,
                  double tolerance = 1e-4);

/// phi_{kT/m}(0, section_y) for k = 0..m-1. Requires m >= 8.
std::vector<Point> cycle_points(const LienardField& field, const LimitCycle& cycle, int m,
                                const FlowSettings& settings);

}  // namespace lienard
