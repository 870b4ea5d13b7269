#include <benchmark/benchmark.h>

#include "steerkit/scenarios.hpp"

namespace {

using namespace steerkit;

void BM_PauliExpectationGhz(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const qubit::DensityMatrix rho(qubit::ghz(n));
  const auto p = qubit::ghz_predictor(n, qubit::SpinComponent::X);
  for (auto _ : state) benchmark::DoNotOptimize(qubit::expectation(rho, p));
}
BENCHMARK(BM_PauliExpectationGhz)->DenseRange(3, 8);

void BM_TwoObsGhz(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const qubit::DensityMatrix rho = noisy_ghz(n, 0.9);
  for (auto _ : state) benchmark::DoNotOptimize(ghz_two_obs(rho, n).value);
}
BENCHMARK(BM_TwoObsGhz)->DenseRange(3, 8);

void BM_OptimalInference(benchmark::State& state) {
  const qubit::DensityMatrix rho = noisy_ghz(3, 0.8);
  const qubit::Pauli yy[] = {qubit::Pauli::Y, qubit::Pauli::Y};
  const auto t = qubit::PauliString::parse("IIX");
  for (auto _ : state) benchmark::DoNotOptimize(qubit::optimal_inference_variance(rho, {{1, 2}, 3}, t, yy));
}
BENCHMARK(BM_OptimalInference);

void BM_ConditionalVariance(benchmark::State& state) {
  const auto g = cv::cv_ghz(1.0);
  const auto t = cv::QuadratureCombo::x(3, 1);
  const auto plan = cv::HomodynePlan::all_x({2, 3});
  for (auto _ : state) benchmark::DoNotOptimize(cv::optimal_conditional_variance(g, t, plan));
}
BENCHMARK(BM_ConditionalVariance);

void BM_CollectiveScanQubit(benchmark::State& state) {
  const qubit::DensityMatrix rho(qubit::ghz(3));
  for (auto _ : state) benchmark::DoNotOptimize(collective_scan(rho, 3, {1, 2}).collective);
}
BENCHMARK(BM_CollectiveScanQubit)->Unit(benchmark::kMillisecond);

void BM_CollectiveScanCv(benchmark::State& state) {
  const auto g = cv::cv_ghz(1.0);
  for (auto _ : state) benchmark::DoNotOptimize(collective_scan(g, 1, {2, 3}).collective);
}
BENCHMARK(BM_CollectiveScanCv)->Unit(benchmark::kMillisecond);

void BM_ShotsQubit(benchmark::State& state) {
  const AnyState rho = noisy_ghz(3, 0.5);
  const auto shots = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(simulate_shots(rho, {}, shots, 1).estimate);
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * shots));
}
BENCHMARK(BM_ShotsQubit)->Arg(1000)->Arg(100000);

void BM_Sweep(benchmark::State& state) {
  SweepConfig cfg;
  cfg.scenario = "ghz";
  cfg.parameter = "eta";
  cfg.criterion = "three-obs";
  cfg.grid = parse_grid("0.01:1:0.01");
  for (auto _ : state) benchmark::DoNotOptimize(run_sweep(cfg, static_cast<unsigned>(state.range(0))).size());
}
BENCHMARK(BM_Sweep)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

} // namespace
BENCHMARK_MAIN();
