#include "fedcedar/clustering.hpp"
#include "fedcedar/local_model.hpp"
#include "fedcedar/prop_graph.hpp"
#include "fedcedar/rng.hpp"

#include <benchmark/benchmark.h>

using namespace fedcedar;

namespace {

// Flattened default MLP (32 -> 64 -> 10) is 2762 coefficients.
constexpr std::size_t kModelSize = 2762;

std::vector<ParamVector> random_vectors(std::size_t n, std::size_t dim, std::uint64_t seed) {
    auto m = std::make_shared<const ShapeManifest>(std::vector<TensorShape>{{"v", {dim}}});
    Rng rng(seed);
    std::vector<ParamVector> out;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> v(dim);
        for (double& x : v) x = rng.normal();
        out.emplace_back(m, std::move(v));
    }
    return out;
}

void BM_KMeans(benchmark::State& state) {
    auto pts = random_vectors(static_cast<std::size_t>(state.range(0)), kModelSize, 1);
    KMeansOptions opt{static_cast<std::size_t>(state.range(1)), 3, 50, 10};
    for (auto _ : state) benchmark::DoNotOptimize(kmeans(pts, opt));
}
BENCHMARK(BM_KMeans)->Args({30, 5})->Args({60, 3})->Unit(benchmark::kMillisecond);

void BM_BuildGraph(benchmark::State& state) {
    auto cs = random_vectors(static_cast<std::size_t>(state.range(0)), kModelSize, 2);
    for (auto _ : state) benchmark::DoNotOptimize(build_graph(cs, 0));
}
BENCHMARK(BM_BuildGraph)->Arg(5)->Arg(30);

void BM_Propagate(benchmark::State& state) {
    auto cs = random_vectors(5, kModelSize, 3);
    auto g = build_graph(cs, 0);
    const int depth = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(propagate(g, cs, depth));
}
BENCHMARK(BM_Propagate)->DenseRange(1, 5);

void BM_TrainLocal(benchmark::State& state) {
    MlpArchitecture arch{{32, 64, 10}};
    ClientDataset data;
    Rng rng(4);
    for (std::size_t i = 0; i < 80; ++i) {
        std::vector<double> x(32);
        for (double& v : x) v = rng.normal();
        data.train.push_back({i, std::move(x), static_cast<int>(i % 2)});
    }
    auto model = LocalModel::initialized(arch, 5);
    TrainConfig cfg;
    for (auto _ : state) benchmark::DoNotOptimize(train_local(model, data, cfg));
}
BENCHMARK(BM_TrainLocal)->Unit(benchmark::kMillisecond);

} // namespace
BENCHMARK_MAIN();
