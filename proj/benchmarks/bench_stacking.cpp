#include <benchmark/benchmark.h>

#include "fsoqos/rng.hpp"
#include "fsoqos/stacking.hpp"

using namespace fsoqos;

static void BM_SolveWeights(benchmark::State& state) {
    const auto m = static_cast<std::size_t>(state.range(0));
    const auto l = static_cast<std::size_t>(state.range(1));
    Rng rng(5);
    std::vector<double> p;
    std::vector<double> y;
    std::vector<std::string> names;
    for (std::size_t j = 0; j < l; ++j) names.push_back("m" + std::to_string(j));
    for (std::size_t i = 0; i < m; ++i) {
        const double t = rng.normal();
        y.push_back(t);
        for (std::size_t j = 0; j < l; ++j) p.push_back(t + 0.3 * rng.normal() + 0.05 * static_cast<double>(j));
    }
    const LabeledTable level1(names, p, y);
    for (auto _ : state) benchmark::DoNotOptimize(stacking::solve_stacking_weights(level1));
}
BENCHMARK(BM_SolveWeights)->Args({1000, 4})->Args({10000, 4})->Args({10000, 10});

static void BM_SimplexProjection(benchmark::State& state) {
    Rng rng(2);
    std::vector<double> v(static_cast<std::size_t>(state.range(0)));
    for (double& x : v) x = rng.normal();
    for (auto _ : state) benchmark::DoNotOptimize(stacking::project_to_simplex(v));
}
BENCHMARK(BM_SimplexProjection)->Arg(4)->Arg(64);
