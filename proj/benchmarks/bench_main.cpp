#include <cmath>

#include <benchmark/benchmark.h>

#include <nlx/solve.hpp>
#include <nlx/verify.hpp>

using namespace nlx;

namespace {

DiscreteOperator frac_op(double s, std::size_t n) {
  return assemble(SpectralKernel::fractional_laplacian(s), Grid::uniform(n));
}

void BM_Assemble(benchmark::State& st) {
  const auto k = SpectralKernel::fractional_laplacian(0.5);
  const Grid g = Grid::uniform(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(assemble(k, g));
}
BENCHMARK(BM_Assemble)->Arg(100)->Arg(400)->Arg(1600)->Unit(benchmark::kMillisecond);

void BM_MinimalSolution(benchmark::State& st) {
  const DiscreteOperator op = frac_op(0.5, static_cast<std::size_t>(st.range(0)));
  const double lam = 0.2;  // about half the fold
  for (auto _ : st) benchmark::DoNotOptimize(minimal_solution(op, SystemSpec::gelfand(), lam, lam));
}
BENCHMARK(BM_MinimalSolution)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_StabilityIndicator(benchmark::State& st) {
  const DiscreteOperator op = frac_op(0.5, static_cast<std::size_t>(st.range(0)));
  SolverOptions o;
  o.compute_stability = false;
  const BranchRecord r = minimal_solution(op, SystemSpec::gelfand(), 0.2, 0.2, o);
  const StabilityForm form(op, SystemSpec::gelfand(), r.lambda, r.gamma, r.u, r.v);
  for (auto _ : st) benchmark::DoNotOptimize(stability_indicator(form));
}
BENCHMARK(BM_StabilityIndicator)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_PvApply(benchmark::State& st) {
  const double s = 0.3;
  const auto k = SpectralKernel::fractional_laplacian(s);
  for (auto _ : st)
    benchmark::DoNotOptimize(pv_apply(k, [s](double y) { return -2 * s * std::log(std::abs(y)); }, 0.5));
}
BENCHMARK(BM_PvApply)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
