#include <benchmark/benchmark.h>

#include <cmath>

#include "tvl/classify.hpp"
#include "tvl/conditions.hpp"
#include "tvl/discrete_engine.hpp"
#include "tvl/kkt_geometry.hpp"
#include "tvl/ode_engine.hpp"
#include "tvl/spectrum.hpp"

namespace {

tvl::Vec matrec_start() {
  tvl::Vec z = tvl::Vec::Zero(6);
  z.head(2) = tvl::matrix_recovery_global(0.0);
  return z;
}

void BM_Geometry(benchmark::State& state) {
  const tvl::ProblemDef p = tvl::make_matrix_recovery(true, 0.5);
  const tvl::Vec z = matrec_start();
  for (auto _ : state) benchmark::DoNotOptimize(tvl::ode_rhs(p, z, 0.3));
}
BENCHMARK(BM_Geometry);

void BM_DiscreteExample1(benchmark::State& state) {
  const tvl::ProblemDef p = tvl::make_example1(10.0, 0.4).problem;
  const tvl::Vec x0 = tvl::Vec::Constant(1, -2.0);
  for (auto _ : state) benchmark::DoNotOptimize(tvl::discrete_trajectory(p, x0, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_DiscreteExample1)->Arg(628)->Arg(6283)->Unit(benchmark::kMillisecond);

void BM_BackwardEulerExample1(benchmark::State& state) {
  const tvl::ProblemDef p = tvl::make_example1(10.0, 0.4).problem;
  const tvl::Vec x0 = tvl::Vec::Constant(1, -2.0);
  for (auto _ : state) benchmark::DoNotOptimize(tvl::backward_euler_trajectory(p, x0, 1e-3));
}
BENCHMARK(BM_BackwardEulerExample1)->Unit(benchmark::kMillisecond);

void BM_DiscreteMatrixRecovery(benchmark::State& state) {
  const tvl::ProblemDef p = tvl::make_matrix_recovery(true, 0.5);
  const tvl::Vec z = matrec_start();
  for (auto _ : state) benchmark::DoNotOptimize(tvl::discrete_trajectory(p, z, 628));
}
BENCHMARK(BM_DiscreteMatrixRecovery)->Unit(benchmark::kMillisecond);

void BM_Reference(benchmark::State& state) {
  const tvl::ProblemDef p = tvl::make_example1(10.0, 0.4).problem;
  const tvl::Vec x0 = tvl::Vec::Constant(1, -2.0);
  for (auto _ : state) benchmark::DoNotOptimize(tvl::integrate_reference(p, x0));
}
BENCHMARK(BM_Reference)->Unit(benchmark::kMillisecond);

void BM_Catalog(benchmark::State& state) {
  const tvl::ProblemDef p = tvl::make_example1(10.0, 0.4).problem;
  const tvl::SearchBox box{tvl::Vec::Constant(1, -6.0), tvl::Vec::Constant(1, 6.0)};
  for (auto _ : state) benchmark::DoNotOptimize(tvl::build_catalog(p, 0.0, 16, 1, box));
}
BENCHMARK(BM_Catalog)->Unit(benchmark::kMillisecond);

void BM_Prop1(benchmark::State& state) {
  const tvl::Scalar1DFunction g = tvl::example1_quartic();
  for (auto _ : state) benchmark::DoNotOptimize(tvl::prop1_check(g, 0.4, 10.0));
}
BENCHMARK(BM_Prop1)->Unit(benchmark::kMicrosecond);

void BM_Thm3(benchmark::State& state) {
  const tvl::ScalarField g = tvl::quartic_field(static_cast<int>(state.range(0)));
  tvl::Vec y = tvl::Vec::Zero(g.n);
  y(0) = -2.0;
  for (auto _ : state) benchmark::DoNotOptimize(tvl::thm3_check(g, {y}, 0.5, 0.4, 10.0, 1.0, 0.1));
}
BENCHMARK(BM_Thm3)->Arg(1)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_Spectrum(benchmark::State& state) {
  const tvl::ProblemDef p = tvl::make_matrix_recovery(true, 0.5);
  const tvl::Vec z = matrec_start();
  for (auto _ : state) benchmark::DoNotOptimize(tvl::eigen_report(tvl::variant_jacobian(p, z, 0.0).total()));
}
BENCHMARK(BM_Spectrum);

}  // namespace

BENCHMARK_MAIN();
