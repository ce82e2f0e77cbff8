#include "sscov/estimators.hpp"
#include "sscov/samplers.hpp"
#include "sscov/selection.hpp"
#include "sscov/spatial.hpp"

#include <benchmark/benchmark.h>

#include <algorithm>

using namespace sscov;

namespace {

Dataset model1_sample(Index p, Index n, std::uint64_t seed) {
    Rng rng(seed);
    const auto model = gen_model1(p, 0.6);
    return sample_elliptical(student_t(3.0), Vector::Zero(p), model.sigma, n, rng);
}

void BM_SpatialMedian(benchmark::State& state) {
    const auto x = model1_sample(state.range(0), 4 * state.range(0), 1);
    for (auto _ : state) benchmark::DoNotOptimize(spatial_median(x));
}
BENCHMARK(BM_SpatialMedian)->Arg(30)->Arg(120);

void BM_Sscm(benchmark::State& state) {
    const auto x = model1_sample(state.range(0), 4 * state.range(0), 2);
    const Vector center = Vector::Zero(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(sscm(x, center));
}
BENCHMARK(BM_Sscm)->Arg(30)->Arg(120);

void BM_Sclime(benchmark::State& state) {
    const Index p = state.range(0);
    const auto m = plugin_matrix(Method::SCLIME, model1_sample(p, 100, 3));
    for (auto _ : state) benchmark::DoNotOptimize(sclime(m, 0.1, SolverConfig{}));
}
BENCHMARK(BM_Sclime)->Arg(30)->Arg(120)->Unit(benchmark::kMillisecond);

void BM_SclimePath(benchmark::State& state) {
    const Index p = state.range(0);
    const auto m = plugin_matrix(Method::SCLIME, model1_sample(p, 100, 4));
    auto grid = lambda_grid(0.005, 1.0, 50).values;
    std::reverse(grid.begin(), grid.end());
    for (auto _ : state) benchmark::DoNotOptimize(clime_path(m, grid, SolverConfig{}));
}
BENCHMARK(BM_SclimePath)->Arg(30)->Unit(benchmark::kMillisecond);

void BM_Sglasso(benchmark::State& state) {
    const Index p = state.range(0);
    const auto m = plugin_matrix(Method::SGLASSO, model1_sample(p, 100, 5));
    for (auto _ : state) benchmark::DoNotOptimize(sglasso(m, 0.1, SolverConfig{}));
}
BENCHMARK(BM_Sglasso)->Arg(30)->Arg(120)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
