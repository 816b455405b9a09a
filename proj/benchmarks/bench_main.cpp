// Microbenchmarks for the hot paths: distance kernels, the two rank
// formulations, the full parallel sweep, and generation. Run with
// ./benchmarks/kstar_bench --benchmark_min_time=0.1s for a quick pass.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "kstar/kstar.hpp"
#include "kstar/neighbors.hpp"
#include "kstar/synth.hpp"

namespace {

kstar::EmbeddingSet bench_set(std::size_t classes, std::size_t per_class, std::size_t dim) {
    kstar::SynthSpec spec;
    spec.layout = kstar::SynthSpec::Layout::clustered;
    spec.classes = classes;
    spec.per_class = per_class;
    spec.dim = dim;
    spec.separation = 6.0;
    spec.seed = 1;
    return kstar::generate(spec);
}

std::vector<double> bench_vec(std::size_t d, std::uint32_t seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(0.1, 2.0);
    std::vector<double> v(d);
    for (auto& x : v) x = u(rng);
    return v;
}

void BM_distance(benchmark::State& state, kstar::Metric metric) {
    const auto d = static_cast<std::size_t>(state.range(0));
    const auto a = bench_vec(d, 1);
    const auto b = bench_vec(d, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(kstar::distance(a.data(), b.data(), d, metric));
    }
    state.SetItemsProcessed(state.iterations());
}

void BM_rank_counting(benchmark::State& state) {
    const auto set = bench_set(4, static_cast<std::size_t>(state.range(0)) / 4, 64);
    const auto index = kstar::build_class_index(set);
    const auto m = kstar::Metric::euclidean();
    std::size_t p = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(kstar::first_heterogeneous_rank(set, index, p, m));
        p = (p + 1) % set.n;
    }
}

void BM_rank_sorting(benchmark::State& state) {
    const auto set = bench_set(4, static_cast<std::size_t>(state.range(0)) / 4, 64);
    const auto m = kstar::Metric::euclidean();
    std::size_t p = 0;
    for (auto _ : state) {
        const auto order = kstar::sorted_neighbors(set, p, m);
        std::uint32_t rank = 0;
        for (std::size_t r = 0; r < order.size(); ++r) {
            if (set.labels[order[r].index] != set.labels[p]) {
                rank = static_cast<std::uint32_t>(r + 1);
                break;
            }
        }
        benchmark::DoNotOptimize(rank);
        p = (p + 1) % set.n;
    }
}

void BM_all_ranks(benchmark::State& state) {
    const auto set = bench_set(8, 100, static_cast<std::size_t>(state.range(0)));
    const auto index = kstar::build_class_index(set);
    const auto m = kstar::Metric::euclidean();
    const int threads = static_cast<int>(state.range(1));
    for (auto _ : state) {
        benchmark::DoNotOptimize(kstar::all_ranks(set, index, m, threads));
    }
    state.SetItemsProcessed(state.iterations() * set.n);
}

void BM_generate(benchmark::State& state) {
    kstar::SynthSpec spec;
    spec.layout = kstar::SynthSpec::Layout::overlapped;
    spec.classes = 2;
    spec.per_class = static_cast<std::size_t>(state.range(0)) / 2;
    spec.dim = 16;
    spec.seed = 3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(kstar::generate(spec));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::size_t>(state.range(0)));
}

}  // namespace

BENCHMARK_CAPTURE(BM_distance, euclidean, kstar::Metric::euclidean())->Arg(16)->Arg(256)->Arg(4096);
BENCHMARK_CAPTURE(BM_distance, cityblock, kstar::Metric::cityblock())->Arg(16)->Arg(256)->Arg(4096);
BENCHMARK_CAPTURE(BM_distance, maxnorm, kstar::Metric::maxnorm())->Arg(16)->Arg(256)->Arg(4096);
BENCHMARK_CAPTURE(BM_distance, cosine, kstar::Metric::cosine())->Arg(16)->Arg(256)->Arg(4096);
BENCHMARK(BM_rank_counting)->Arg(200)->Arg(800);
BENCHMARK(BM_rank_sorting)->Arg(200)->Arg(800);
BENCHMARK(BM_all_ranks)->Args({32, 1})->Args({32, 4})->Args({256, 1})->Args({256, 4});
BENCHMARK(BM_generate)->Arg(200)->Arg(2000);

BENCHMARK_MAIN();
