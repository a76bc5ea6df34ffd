#include <benchmark/benchmark.h>

#include <random>

#include "courtrack/assignment.hpp"
#include "courtrack/cost.hpp"
#include "courtrack/synth.hpp"
#include "courtrack/track.hpp"

using namespace courtrack;

static void BM_SolveAssignment(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    CostMatrix m(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) m(r, c) = u(rng);
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_assignment(m));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SolveAssignment)->RangeMultiplier(2)->Range(4, 128)->Complexity();

static void BM_SimilarityCost(benchmark::State& state) {
    ScenarioSpec spec;
    spec.n_targets = 2;
    spec.n_frames = 2;
    const auto seq = generate(spec);
    const ObservedBox a{seq.detections[0][0].detection, seq.homographies[0], seq.frames[0], 0};
    const ObservedBox b{seq.detections[1][1].detection, seq.homographies[1], seq.frames[1], 1};
    for (auto _ : state) {
        benchmark::DoNotOptimize(similarity_cost(a, b, CostWeights{}, spec.dims));
    }
}
BENCHMARK(BM_SimilarityCost);

static void BM_RunTracker(benchmark::State& state) {
    ScenarioSpec spec;
    spec.n_targets = static_cast<int>(state.range(0));
    spec.n_frames = 40;
    spec.dims = {1920, 1080};
    const auto frames = degrade(generate(spec), 0.1, 1).to_sequence();
    const MatchConfig cfg;
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_tracker(frames, cfg));
    }
}
BENCHMARK(BM_RunTracker)->Arg(5)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
