#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "jitterlink/beam_optics.hpp"
#include "jitterlink/misalignment_model.hpp"
#include "jitterlink/signal_chain.hpp"
#include "jitterlink/stats_analysis.hpp"

using namespace jitterlink;

static void BM_EnvelopeDetector(benchmark::State& state) {
    const double fs = 5e6;
    std::vector<double> block(1 << 16);
    for (std::size_t k = 0; k < block.size(); ++k) block[k] = std::sin(2 * std::numbers::pi * 0.08 * k);
    for (auto _ : state) {
        EnvelopeDetector det(400e3, fs, EnvelopeOptions{static_cast<double>(state.range(0)), 0.0});
        for (int i = 0; i < 16; ++i) det.push(block);
        benchmark::DoNotOptimize(det.take());
    }
    state.SetItemsProcessed(state.iterations() * 16 * static_cast<std::int64_t>(block.size()));
}
BENCHMARK(BM_EnvelopeDetector)->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);

static void BM_InverseCdfSampling(benchmark::State& state) {
    const MisalignmentModel m(5.0, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(sample(static_cast<std::size_t>(state.range(0)), m, 1));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_InverseCdfSampling)->Arg(1'000'000)->Unit(benchmark::kMillisecond);

static void BM_Histogram(benchmark::State& state) {
    const auto v = sample(1'000'000, MisalignmentModel(3.0, 1.0), 2);
    for (auto _ : state) {
        const auto h = histogram(v);
        benchmark::DoNotOptimize(detect_modes(h));
    }
}
BENCHMARK(BM_Histogram)->Unit(benchmark::kMillisecond);

static void BM_KsDistance(benchmark::State& state) {
    const MisalignmentModel m(3.0, 1.0);
    const auto v = sample(1'000'000, m, 3);
    for (auto _ : state) benchmark::DoNotOptimize(ks_distance(v, m));
}
BENCHMARK(BM_KsDistance)->Unit(benchmark::kMillisecond);

static void BM_ApertureQuadrature(benchmark::State& state) {
    const auto shape = state.range(0) ? ApertureShape::circular : ApertureShape::equal_area_square;
    for (auto _ : state) benchmark::DoNotOptimize(collected_fraction_exact(0.5, 1.649523, 0.1524, shape));
}
BENCHMARK(BM_ApertureQuadrature)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
