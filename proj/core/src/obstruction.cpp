#include "lienard/obstruction.hpp"

#include <cmath>

namespace lienard {

double cycle_integral(const LienardField& field, const LimitCycle& cycle, const Rhs& f,
                      const FlowSettings& settings) {
  const ScalarFn integrand = [&f](Point p) { return f(p); };
  return flow_with_quadrature(field, {0.0, cycle.section_y}, integrand, cycle.period, settings).integral;
}

ObstructionReport admissibility(const LienardField& field, const CycleSet& cycles, const Rhs& f, double tolerance,
                                const FlowSettings& settings) {
  ObstructionReport report;
  report.tolerance = tolerance;
  report.f_at_origin = f({0.0, 0.0});
  report.admissible = std::abs(report.f_at_origin) < tolerance;
  for (const auto& c : cycles.cycles) {
    const double value = cycle_integral(field, c, f, settings);
    report.cycle_integrals.push_back(value);
    report.periods.push_back(c.period);
    if (!(std::abs(value) < tolerance * c.period)) report.admissible = false;
  }
  return report;
}

std::vector<std::vector<double>> functional_matrix(const LienardField& field, const CycleSet& cycles,
                                                   const std::vector<Rhs>& fs, const FlowSettings& settings) {
  std::vector<std::vector<double>> m(cycles.count() + 1, std::vector<double>(fs.size(), 0.0));
  for (std::size_t j = 0; j < fs.size(); ++j) {
    m[0][j] = fs[j]({0.0, 0.0});
    for (std::size_t i = 0; i < cycles.count(); ++i) m[i + 1][j] = cycle_integral(field, cycles.cycles[i], fs[j], settings);
  }
  return m;
}

}  // namespace lienard
