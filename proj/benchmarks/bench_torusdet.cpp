#include <benchmark/benchmark.h>

#include "torusdet/heat_kernel.hpp"
#include "torusdet/special_functions.hpp"
#include "torusdet/zeta_engine.hpp"

using namespace torusdet;

namespace {

const OperatorSpec& skewed() {
  static const auto spec = make_operator(0.3, 1.2, 1.5);
  return spec;
}

}  // namespace

static void BM_HeatTrace(benchmark::State& state) {
  const double t = static_cast<double>(state.range(0)) / 100.0;
  for (auto _ : state) benchmark::DoNotOptimize(heat_trace(skewed(), t).value);
}
BENCHMARK(BM_HeatTrace)->Arg(2)->Arg(10)->Arg(100)->Arg(1000);

static void BM_HeatRemainder(benchmark::State& state) {
  const double t = static_cast<double>(state.range(0)) / 100.0;
  for (auto _ : state) benchmark::DoNotOptimize(heat_remainder(skewed(), t));
}
BENCHMARK(BM_HeatRemainder)->Arg(2)->Arg(100);

static void BM_BesselK(benchmark::State& state) {
  const BesselOrder nu(static_cast<double>(state.range(0)) / 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(bessel_k(nu, 1.7));
}
BENCHMARK(BM_BesselK)->Arg(0)->Arg(1)->Arg(2);

static void BM_PsiPaper(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(psi_paper(skewed()).total);
}
BENCHMARK(BM_PsiPaper);

static void BM_PsiClosedForm(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(psi_closed_form(skewed()).total);
}
BENCHMARK(BM_PsiClosedForm);

static void BM_PsiCorrected(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(psi_corrected(skewed()).value);
}
BENCHMARK(BM_PsiCorrected);

static void BM_Oracle(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(zeta_prime0_oracle(skewed()).value);
}
BENCHMARK(BM_Oracle);

static void BM_ZetaDirect(benchmark::State& state) {
  EvalOptions opts;
  opts.tol = 1e-9;
  for (auto _ : state) benchmark::DoNotOptimize(zeta_direct(skewed(), 1.5, opts).value);
}
BENCHMARK(BM_ZetaDirect);

static void BM_ZetaSubtraction(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(zeta_subtraction(skewed(), 0.5).value);
}
BENCHMARK(BM_ZetaSubtraction);

static void BM_CompareRoutes(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(compare_routes(skewed()).oracle.psi);
}
BENCHMARK(BM_CompareRoutes);
BENCHMARK_MAIN();
