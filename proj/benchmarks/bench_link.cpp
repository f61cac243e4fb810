#include <benchmark/benchmark.h>

#include "fsoqos/atmosphere.hpp"
#include "fsoqos/link_budget.hpp"

using namespace fsoqos;

static void BM_ExtinctionSweep(benchmark::State& state) {
    for (auto _ : state) {
        double acc = 0.0;
        for (double v = 0.5; v <= 10.0; v += 0.25) {
            for (double lambda : {760.0, 860.0, 960.0, 1260.0, 1550.0}) {
                atmosphere::OpticalPath p;
                p.visibility_km = v;
                p.wavelength_nm = lambda;
                acc += atmosphere::extinction_coefficient(p, atmosphere::AttenuationModel::Kim);
            }
        }
        benchmark::DoNotOptimize(acc);
    }
}
BENCHMARK(BM_ExtinctionSweep);

static void BM_Ber(benchmark::State& state) {
    double s = 1.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(link::ber(link::OokScheme::NrzOok, s));
        s = s < 1000.0 ? s * 1.01 : 1.0;
    }
}
BENCHMARK(BM_Ber);

static void BM_RequiredSnr(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(link::required_snr_for_ber(link::OokScheme::NrzOok, 1e-9));
}
BENCHMARK(BM_RequiredSnr);

static void BM_PowerPenalty(benchmark::State& state) {
    const link::TransceiverConfig cfg;
    const link::ReceiverNoiseConfig noise;
    for (auto _ : state) benchmark::DoNotOptimize(link::power_penalty_db(cfg, noise, 0.17, 5.0, 1.0, 1e-9));
}
BENCHMARK(BM_PowerPenalty);
