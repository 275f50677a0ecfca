#include <benchmark/benchmark.h>

#include "gnes/feedback.hpp"
#include "gnes/graph.hpp"
#include "gnes/oracle.hpp"
#include "gnes/scenario.hpp"
#include "gnes/sim.hpp"

using namespace gnes;

namespace {

RealizedScenario realized(const std::string& name, FeedbackMode mode) {
  Scenario sc = builtin_scenario(name);
  sc.mode.kind = mode;
  if (mode == FeedbackMode::distributed) {
    sc.mode.epsilon = 0.01;
    sc.mode.k = 1.0;
  }
  return realize(sc);
}

void BM_algebraic_connectivity(benchmark::State& state) {
  const CommGraph g = benchmark_graph_10();
  for (auto _ : state) benchmark::DoNotOptimize(algebraic_connectivity(g));
}
BENCHMARK(BM_algebraic_connectivity);

void BM_pseudo_gradient(benchmark::State& state) {
  const RealizedScenario rs = realized("osnr10", FeedbackMode::full_info);
  const Vector y = rs.constraints.slater_point;
  for (auto _ : state) benchmark::DoNotOptimize(pseudo_gradient(rs.game, y));
}
BENCHMARK(BM_pseudo_gradient);

void BM_field_full_info(benchmark::State& state) {
  const RealizedScenario rs = realized("osnr10", FeedbackMode::full_info);
  for (auto _ : state)
    benchmark::DoNotOptimize(rs.system.vector_field(rs.x0));
}
BENCHMARK(BM_field_full_info);

void BM_field_partial_info(benchmark::State& state) {
  const RealizedScenario rs = realized("osnr10", FeedbackMode::partial_info);
  for (auto _ : state)
    benchmark::DoNotOptimize(rs.system.vector_field(rs.x0));
}
BENCHMARK(BM_field_partial_info);

void BM_field_distributed(benchmark::State& state) {
  const RealizedScenario rs = realized("osnr10", FeedbackMode::distributed);
  for (auto _ : state)
    benchmark::DoNotOptimize(rs.system.vector_field(rs.x0));
}
BENCHMARK(BM_field_distributed);

void BM_guarded_integration(benchmark::State& state) {
  const RealizedScenario rs = realized("quad3", FeedbackMode::full_info);
  SimConfig cfg = rs.scenario.sim;
  cfg.t_final = 1.0;
  cfg.record_stride = 1000;
  for (auto _ : state)
    benchmark::DoNotOptimize(integrate(rs.system, rs.x0, cfg));
}
BENCHMARK(BM_guarded_integration);

void BM_newton_solve(benchmark::State& state) {
  const BuiltGame bg = build_game(builtin_scenario("quad3").game);
  const BarrierPenalty pen = make_barrier(0.1, bg.constraints);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        solve_penalized_ne(bg.game, pen, bg.constraints.slater_point));
}
BENCHMARK(BM_newton_solve);

}  // namespace

BENCHMARK_MAIN();
