#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "dnc/hum.hpp"
#include "dnc/random_fields.hpp"
#include "dnc/weights.hpp"

namespace {

const dnc::ControlWindow kOmega{0.3, 0.8};
const auto kA = dnc::DegeneracyCoefficient::power(0.5);

std::vector<double> sine_datum(const dnc::SpaceTimeGrid& g) {
  std::vector<double> u0(g.nodes(), 0.0);
  for (int i = 1; i < g.nx; ++i) u0[i] = std::sin(std::numbers::pi * g.x[i]);
  return u0;
}

dnc::WeightFields control_fields(const dnc::SpaceTimeGrid& g) {
  dnc::CarlemanParams p;
  p.s = 0.01;
  p.omega_prime = dnc::default_omega_prime(kOmega);
  return dnc::build_weight_fields(p, kA, g);
}

void BM_Forward(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto g = dnc::build_grid(n, n, 1.0);
  const dnc::LinearParabolic sys(kA, g.make_field(1.0), g);
  const auto src = dnc::random_sine_field(g, 1);
  const auto u0 = sine_datum(g);
  for (auto _ : state) benchmark::DoNotOptimize(sys.forward(src, u0));
  state.SetItemsProcessed(state.iterations() * g.nt * g.nodes());
}
BENCHMARK(BM_Forward)->RangeMultiplier(2)->Range(32, 512);

void BM_Adjoint(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto g = dnc::build_grid(n, n, 1.0);
  const dnc::LinearParabolic sys(kA, g.make_field(1.0), g);
  const auto q = dnc::random_sine_field(g, 2);
  for (auto _ : state) benchmark::DoNotOptimize(sys.adjoint(q));
  state.SetItemsProcessed(state.iterations() * g.nt * g.nodes());
}
BENCHMARK(BM_Adjoint)->RangeMultiplier(2)->Range(32, 512);

void BM_FactorSystem(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto g = dnc::build_grid(n, n, 1.0);
  const auto c = g.make_field(1.0);
  for (auto _ : state) benchmark::DoNotOptimize(dnc::LinearParabolic(kA, c, g));
}
BENCHMARK(BM_FactorSystem)->RangeMultiplier(2)->Range(32, 512);

void BM_WeightFields(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto g = dnc::build_grid(n, n, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(dnc::build_weight_fields({}, kA, g));
}
BENCHMARK(BM_WeightFields)->RangeMultiplier(2)->Range(32, 256);

// One gradient evaluation is one forward and one adjoint solve; a CG step
// costs one of each plus the weighted inner products.
void BM_GradJn(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto g = dnc::build_grid(n, n, 1.0);
  const dnc::LinearParabolic sys(kA, g.make_field(1.0), g);
  auto fields = control_fields(g);
  dnc::build_truncated_fields(fields, 1e3, kOmega, g);
  const auto w = dnc::build_control_weights(fields, kOmega, g, 8.0);
  const dnc::ControlProblem problem(sys, kOmega, g.make_field(), sine_datum(g));
  const auto h = dnc::restrict_to_window(dnc::random_sine_field(g, 3), kOmega, g);
  for (auto _ : state) benchmark::DoNotOptimize(dnc::grad_Jn(problem, h, w));
}
BENCHMARK(BM_GradJn)->RangeMultiplier(2)->Range(32, 256);

void BM_CgIteration(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto g = dnc::build_grid(n, n, 1.0);
  const dnc::LinearParabolic sys(kA, g.make_field(1.0), g);
  auto fields = control_fields(g);
  dnc::build_truncated_fields(fields, 1.0, kOmega, g);
  const auto w = dnc::build_control_weights(fields, kOmega, g, 8.0);
  const dnc::ControlProblem problem(sys, kOmega, g.make_field(), sine_datum(g));
  const auto h0 = g.make_field();
  for (auto _ : state) benchmark::DoNotOptimize(dnc::minimize_Jn(problem, w, h0, 1e-300, 10));
  state.SetItemsProcessed(state.iterations() * 10);
}
BENCHMARK(BM_CgIteration)->RangeMultiplier(2)->Range(32, 128);

void BM_NullControlBenchmark(benchmark::State& state) {
  const auto g = dnc::build_grid(64, 64, 1.0);
  const dnc::LinearParabolic sys(kA, g.make_field(1.0), g);
  const auto fields = control_fields(g);
  const dnc::ControlProblem problem(sys, kOmega, g.make_field(), sine_datum(g));
  for (auto _ : state) {
    benchmark::DoNotOptimize(dnc::solve_null_control(problem, fields, kOmega, {}, {}));
  }
}
BENCHMARK(BM_NullControlBenchmark)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
