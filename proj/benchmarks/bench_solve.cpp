#include <benchmark/benchmark.h>

#include "coreflow/flow.hpp"
#include "coreflow/graph.hpp"
#include "coreflow/instance.hpp"
#include "coreflow/reduce.hpp"
#include "coreflow/saa.hpp"
#include "coreflow/solver.hpp"

namespace {

using namespace coreflow;

TwoStageInstance sized_instance(int side, int scenarios, std::uint64_t seed) {
  GenParams params;
  params.left_count = side;
  params.right_count = side;
  params.scenario_count = scenarios;
  params.density = Rational(1, 2);
  return gen_random(params, seed);
}

void BM_SolveTwoStage(benchmark::State& state) {
  const TwoStageInstance inst =
      sized_instance(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)), 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_two_stage(inst));
  }
}
BENCHMARK(BM_SolveTwoStage)->Args({3, 2})->Args({5, 3})->Args({8, 4})->Args({12, 6});

void BM_BruteForceTwoStage(benchmark::State& state) {
  const TwoStageInstance inst = sized_instance(static_cast<int>(state.range(0)), 2, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(brute_force_two_stage(inst));
  }
}
BENCHMARK(BM_BruteForceTwoStage)->Arg(3)->Arg(5)->Arg(7);

void BM_SolveMultistage(benchmark::State& state) {
  const MultistageInstance inst = gen_random_multistage(
      static_cast<int>(state.range(0)), static_cast<int>(state.range(1)), Rational(1, 2),
      DiffMode::Abs, 11);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_multistage(inst));
  }
}
BENCHMARK(BM_SolveMultistage)->Args({6, 3})->Args({8, 5})->Args({10, 8});

void BM_MaxMatching(benchmark::State& state) {
  const TwoStageInstance inst = sized_instance(static_cast<int>(state.range(0)), 1, 13);
  for (auto _ : state) {
    benchmark::DoNotOptimize(matching_number(inst.stage0));
  }
}
BENCHMARK(BM_MaxMatching)->Arg(8)->Arg(16)->Arg(32);

void BM_AuxiliaryMaxFlow(benchmark::State& state) {
  const TwoStageInstance inst =
      sized_instance(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)), 17);
  const StageSystem sys = StageSystem::from_two_stage(inst);
  const ObjectiveCoefficients coeffs = objective_from_instance(inst);
  const AuxGraph aux = build_aux_graph(sys, coeffs, epsilon(coeffs));
  for (auto _ : state) {
    benchmark::DoNotOptimize(max_flow(aux.net));
  }
}
BENCHMARK(BM_AuxiliaryMaxFlow)->Args({5, 3})->Args({12, 6})->Args({16, 10});

void BM_ExactExpectedValue(benchmark::State& state) {
  // path base graph of the requested size
  std::string text;
  for (int i = 0; i + 1 < state.range(0); ++i) {
    text += "x" + std::to_string(i) + " x" + std::to_string(i + 1) + "\n";
  }
  const HardnessInstance h = build_hardness_instance(parse_edge_list(text));
  const Allocation y = Allocation::indicator(h.stage0, min_vertex_cover(h.stage0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(exact_expected_value(y, h));
  }
}
BENCHMARK(BM_ExactExpectedValue)->Arg(4)->Arg(6)->Arg(8);

}  // namespace

BENCHMARK_MAIN();
