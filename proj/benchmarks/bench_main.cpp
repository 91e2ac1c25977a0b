#include <benchmark/benchmark.h>

#include "jointcs/analysis.hpp"
#include "jointcs/experiments.hpp"
#include "jointcs/generation.hpp"
#include "jointcs/solver.hpp"

using namespace jointcs;

namespace {

struct Instance {
  Problem problem;
  MeasurementEnsemble ys;
};

Instance make_instance(Index n, Index m, Index l, Index k, SignalType type) {
  const ProblemDims dims{n, m, l, k};
  const Seed seed(7);
  const SupportSet omega = draw_support(n, k, seed);
  SignalEnsemble signals = gen_signals(type, dims, omega, seed);
  SensingEnsemble sensing = draw_sensing(dims, seed);
  MeasurementEnsemble ys = sense(sensing, signals);
  return {Problem{dims, std::move(signals), std::move(sensing)},
          std::move(ys)};
}

void bm_somp(benchmark::State& state, Detection det, Estimation est) {
  const Index m = state.range(0);
  const Index k = state.range(1);
  const Instance inst = make_instance(100, m, 3, k, SignalType::TypeII);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        somp_run(inst.problem.sensing, inst.ys, k, SolverConfig{det, est}));
  }
}

void somp_args(benchmark::internal::Benchmark* b) {
  b->Args({25, 10})->Args({50, 25})->Args({100, 50})->Args({100, 100});
}

void bm_correlate_a(benchmark::State& state) {
  const Instance inst = make_instance(100, state.range(0), 3, 10, SignalType::TypeI);
  const Matrix residuals = inst.ys.ys;
  for (auto _ : state)
    benchmark::DoNotOptimize(correlate_a(inst.problem.sensing, residuals));
}

void bm_correlate_b(benchmark::State& state) {
  const Instance inst = make_instance(100, state.range(0), 3, 10, SignalType::TypeI);
  const Matrix residuals = inst.ys.ys;
  for (auto _ : state)
    benchmark::DoNotOptimize(correlate_b(inst.problem.sensing, residuals));
}

void bm_ric_exact(benchmark::State& state) {
  const Index n = state.range(0);
  const Index order = state.range(1);
  const ProblemDims dims{n, 8, 1, 1};
  const Matrix phi =
      draw_sensing(dims, Seed(11)).phis[0] / std::sqrt(8.0);
  for (auto _ : state) benchmark::DoNotOptimize(ric_exact(phi, order));
}

void bm_epsilon_metrics(benchmark::State& state) {
  const Index k = state.range(0);
  const ProblemDims dims{64, 1, 4, k};
  const Seed seed(3);
  const SupportSet omega = draw_support(64, k, seed);
  const SignalEnsemble x = gen_signals(SignalType::TypeIII, dims, omega, seed);
  for (auto _ : state) benchmark::DoNotOptimize(ensemble_metrics(x));
}

void bm_trial(benchmark::State& state) {
  const ProblemDims dims{100, state.range(0), 3, state.range(1)};
  const Seed master(20260818);
  std::int64_t trial = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(
        run_trial(master, SignalType::TypeII, dims, trial++));
}

BENCHMARK_CAPTURE(bm_somp, ac, Detection::A, Estimation::C)->Apply(somp_args);
BENCHMARK_CAPTURE(bm_somp, bc, Detection::B, Estimation::C)->Apply(somp_args);
BENCHMARK_CAPTURE(bm_somp, bd, Detection::B, Estimation::D)->Apply(somp_args);
BENCHMARK(bm_correlate_a)->Arg(25)->Arg(100);
BENCHMARK(bm_correlate_b)->Arg(25)->Arg(100);
BENCHMARK(bm_ric_exact)->Args({12, 2})->Args({12, 3})->Args({16, 4});
BENCHMARK(bm_epsilon_metrics)->Arg(8)->Arg(16)->Arg(20);
BENCHMARK(bm_trial)->Args({50, 25})->Args({100, 50});

}  // namespace

BENCHMARK_MAIN();
