#include "instances.hpp"

#include "cbi/matfun.hpp"
#include "cbi/moments.hpp"
#include "cbi/simulator.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

cbi::AdmissibleParams two_type() {
  cbi::ParamsCandidate c;
  c.d = 2;
  c.c = {0.5, 0.0};
  c.beta = {0.3, 0.2};
  c.B = {{-0.6, 0.2}, {0.3, -0.5}};
  c.nu = {{{0.5, 0.5}, 0.6}};
  c.mu = {{{{0.8, 0.3}, 0.5}}, {{{0.2, 1.2}, 0.4}}};
  return cbi::make_params(c);
}

void BM_Expm(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n01;
  cbi::Matrix A(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) A(i, j) = n01(rng);
  for (auto _ : state) benchmark::DoNotOptimize(cbi::expm(A, 1.3));
}
BENCHMARK(BM_Expm)->DenseRange(1, 6);

void BM_RawTrajectory(benchmark::State& state) {
  const auto p = two_type();
  const auto law = cbi::InitialLaw::deterministic(cbi::Vector::Ones(2));
  const int q = static_cast<int>(state.range(0));
  const int M = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(cbi::raw_trajectory(p, law, q, 1.0, M));
}
BENCHMARK(BM_RawTrajectory)->ArgsProduct({{2, 3, 4}, {100, 400}})->Unit(benchmark::kMillisecond);

void BM_CentralTrajectory(benchmark::State& state) {
  const auto p = two_type();
  const auto law = cbi::InitialLaw::deterministic(cbi::Vector::Ones(2));
  for (auto _ : state) benchmark::DoNotOptimize(cbi::central_trajectory(p, law, 3, 1.0, 400));
}
BENCHMARK(BM_CentralTrajectory)->Unit(benchmark::kMillisecond);

void BM_SimulatePath(benchmark::State& state) {
  const auto p = two_type();
  cbi::SimConfig cfg;
  cfg.T = 1.0;
  cfg.h = 1.0 / static_cast<double>(state.range(0));
  cfg.x0 = cbi::Vector::Ones(2);
  cfg.record_times = {1.0};
  std::uint64_t path = 0;
  for (auto _ : state) benchmark::DoNotOptimize(cbi::simulate_path(p, cfg, path++));
}
BENCHMARK(BM_SimulatePath)->Arg(100)->Arg(1000)->Unit(benchmark::kMicrosecond);

void BM_SimulateCoupled(benchmark::State& state) {
  const auto p = two_type();
  cbi::SimConfig cfg;
  cfg.T = 1.0;
  cfg.h = 1e-3;
  cfg.x0 = cbi::Vector::Ones(2);
  cfg.K_levels = {1.1, 1.3, cbi::kInfiniteLevel};
  cfg.record_times = {1.0};
  std::uint64_t path = 0;
  for (auto _ : state) benchmark::DoNotOptimize(cbi::simulate_coupled(p, cfg, path++));
}
BENCHMARK(BM_SimulateCoupled)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
