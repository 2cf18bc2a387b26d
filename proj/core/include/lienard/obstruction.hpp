#pragma once

#include <vector>

#include "lienard/cycles.hpp"
#include "lienard/rhs.hpp"

namespace lienard {

/// Values of the n+1 cokernel functionals on a right-hand side: f(0) and
/// the loop integral of f over each cycle.
struct ObstructionReport {
  double f_at_origin = 0.0;
  std::vector<double> cycle_integrals;
  std::vector<double> periods;
  double tolerance = 1e-6;
  /// |f(0)| < tol and |loop integral_i| < tol * period_i for every cycle.
  bool admissible = true;
};

/// Loop integral of f over one period starting at the cycle's section point.
double cycle_integral(const LienardField& field, const LimitCycle& cycle, const Rhs& f,
                      const FlowSettings& settings);

ObstructionReport admissibility(const LienardField& field, const CycleSet& cycles, const Rhs& f,
                                double tolerance = 1e-6, const FlowSettings& settings = {});

/// Rows: the n+1 functionals (value at the origin, then each loop
/// integral); columns: the given right-hand sides.
std::vector<std::vector<double>> functional_matrix(const LienardField& field, const CycleSet& cycles,
                                                   const std::vector<Rhs>& fs, const FlowSettings& settings = {});

}  // namespace lienard
