#include <benchmark/benchmark.h>

#include "sbc/jump_model.hpp"
#include "sbc/sim.hpp"

namespace {

sbc::EpisodeConfig worked_episode(std::size_t n) {
  sbc::EpisodeConfig cfg;
  cfg.horizon = n;
  cfg.channel = {0.9, {0.2, 0.25, 0.25, 0.1, 0.1, 0.05}, 0.05};
  cfg.steps = 50;
  return cfg;
}

void BM_RunEpisode(benchmark::State& state) {
  sbc::EpisodeConfig cfg = worked_episode(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sbc::run_episode(cfg));
    ++cfg.seed;
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cfg.steps));
}
BENCHMARK(BM_RunEpisode)->Arg(1)->Arg(3)->Arg(10);

void BM_LiftedTrajectory(benchmark::State& state) {
  sbc::EpisodeConfig cfg = worked_episode(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sbc::lifted_trajectory(cfg));
    ++cfg.seed;
  }
}
BENCHMARK(BM_LiftedTrajectory)->Arg(1)->Arg(3)->Arg(10);

void BM_MonteCarlo(benchmark::State& state) {
  const sbc::EpisodeConfig cfg = worked_episode(3);
  const auto workers = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sbc::monte_carlo(cfg, 100, workers));
}
BENCHMARK(BM_MonteCarlo)->Arg(1)->Arg(2)->Arg(4)->UseRealTime();

void BM_BufferProcess(benchmark::State& state) {
  sbc::BufferLengthProcess p({0.9, {0.2, 0.25, 0.25, 0.1, 0.1, 0.05}, 0.05},
                             static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(p.advance());
}
BENCHMARK(BM_BufferProcess)->Arg(3)->Arg(10);

}  // namespace

BENCHMARK_MAIN();
