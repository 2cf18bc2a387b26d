#include <benchmark/benchmark.h>

#include "lienard/cohomology.hpp"
#include "lienard/cycles.hpp"
#include "lienard/poly_index.hpp"

using namespace lienard;

namespace {

LienardField van_der_pol() { return LienardField(UniPoly({0, -1, 0, Rational(1, 3)})); }
LienardField two_cycle() { return LienardField(UniPoly({0, Rational(1, 2), 0, Rational(-5, 6), 0, Rational(1, 5)})); }

void BM_ReturnMap(benchmark::State& state) {
  const LienardField f = van_der_pol();
  const FlowSettings s;
  for (auto _ : state) benchmark::DoNotOptimize(return_map(f, 2.0, s));
}
BENCHMARK(BM_ReturnMap);

void BM_FindCycles(benchmark::State& state) {
  const LienardField f = state.range(0) == 0 ? van_der_pol() : two_cycle();
  CycleSearchOptions o;
  o.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(find_cycles(f, o, {}));
}
BENCHMARK(BM_FindCycles)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_ExactRank(benchmark::State& state) {
  const OperatorMatrix m = build_matrix(van_der_pol(), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(exact_rank(m));
}
BENCHMARK(BM_ExactRank)->DenseRange(4, 12, 4)->Unit(benchmark::kMillisecond);

void BM_SolveAt(benchmark::State& state) {
  const LienardField f = van_der_pol();
  const CycleSet cs = find_cycles(f, {}, {});
  const BiPoly g = BiPoly::x() * BiPoly::x() + BiPoly::x() * BiPoly::y();
  CohomologySolver solver(f, cs, Rhs(lie_derivative_poly(f, g)));
  solver.chain();
  const Point p = state.range(0) == 0 ? Point{0.5, 0.3} : Point{3.0, -2.0};
  for (auto _ : state) benchmark::DoNotOptimize(solver.solve_at(p));
}
BENCHMARK(BM_SolveAt)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
