#include <benchmark/benchmark.h>

#include <cmath>

#include "fsoqos/gradient_boost.hpp"
#include "fsoqos/neural.hpp"
#include "fsoqos/random_forest.hpp"
#include "fsoqos/rng.hpp"
#include "fsoqos/tree.hpp"

using namespace fsoqos;

namespace {

LabeledTable make_table(std::size_t m) {
    Rng rng(1);
    std::vector<double> x;
    std::vector<double> y;
    for (std::size_t i = 0; i < m; ++i) {
        const double a = rng.uniform() * 10;
        const double b = rng.normal();
        const double c = rng.uniform();
        const double d = static_cast<double>(rng.index(2));
        const double e = rng.uniform() * 800 + 700;
        x.insert(x.end(), {a, b, c, d, e});
        y.push_back(std::log1p(a) - 2 * b * c + 0.001 * e + d);
    }
    return LabeledTable({"a", "b", "c", "d", "e"}, x, y);
}

}  // namespace

static void BM_TreeFit(benchmark::State& state) {
    const auto data = make_table(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(learners::fit_regression_tree(data));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_TreeFit)->RangeMultiplier(4)->Range(256, 4096)->Complexity()->Unit(benchmark::kMillisecond);

static void BM_ForestFit(benchmark::State& state) {
    const auto data = make_table(2000);
    learners::ForestOptions o;
    o.n_trees = static_cast<std::size_t>(state.range(0));
    o.seed = 3;
    for (auto _ : state) benchmark::DoNotOptimize(learners::fit_random_forest(data, o));
}
BENCHMARK(BM_ForestFit)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

static void BM_GradientBoostFit(benchmark::State& state) {
    const auto data = make_table(2000);
    learners::GradientBoostOptions o;
    o.n_trees = 50;
    o.max_depth = 4;
    for (auto _ : state) benchmark::DoNotOptimize(learners::fit_gradient_boost(data, o));
}
BENCHMARK(BM_GradientBoostFit)->Unit(benchmark::kMillisecond);

static void BM_MlpEpoch(benchmark::State& state) {
    const auto data = make_table(2000);
    neural::TrainConfig cfg;
    cfg.epochs = 1;
    cfg.early_stop_patience = 0;
    const auto init =
        neural::MlpModel::initialized({5, 10, 1}, neural::ActivationKind::Sigmoid, neural::ActivationKind::Direct, 1);
    for (auto _ : state) benchmark::DoNotOptimize(neural::train(init, data, nullptr, cfg));
}
BENCHMARK(BM_MlpEpoch)->Unit(benchmark::kMillisecond);

static void BM_ForestPredict(benchmark::State& state) {
    const auto data = make_table(1000);
    learners::ForestOptions o;
    o.n_trees = 50;
    const auto forest = learners::fit_random_forest(data, o);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(forest.predict(data.row(i)));
        i = (i + 1) % data.rows();
    }
}
BENCHMARK(BM_ForestPredict);
