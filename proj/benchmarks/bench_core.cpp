#include <benchmark/benchmark.h>

#include <complex>
#include <vector>

#include "otfsop/fading.hpp"
#include "otfsop/montecarlo.hpp"
#include "otfsop/otfs.hpp"
#include "otfsop/outage.hpp"
#include "otfsop/random.hpp"
#include "otfsop/special.hpp"

using namespace otfsop;

namespace {

const fading::SRParams kFhs{1, 0.063, 7e-4};
const fading::SRParams kKarasawa{2, 0.0158, 0.123};

void BM_SampleSrGain(benchmark::State& state) {
    RandomStream rng(1, 0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(fading::sample_sr_gain(kFhs, rng));
    }
}
BENCHMARK(BM_SampleSrGain);

void BM_SampleNakagamiPower(benchmark::State& state) {
    RandomStream rng(2, 0);
    const fading::NakagamiParams p{8.0, 1.0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(fading::sample_nakagami_power(p, rng));
    }
}
BENCHMARK(BM_SampleNakagamiPower);

// One Monte Carlo trial of the first-hop phi statistic (N = M = 8).
void BM_PhiSrTrial(benchmark::State& state) {
    const int antennas = static_cast<int>(state.range(0));
    RandomStream rng(3, 0);
    for (auto _ : state) {
        double phi = 0.0;
        for (int b = 0; b < 64; ++b) {
            double rho = 0.0;
            for (int i = 0; i < antennas; ++i) rho += std::norm(fading::sample_sr_gain(kFhs, rng));
            phi += 1.0 / rho;
        }
        benchmark::DoNotOptimize(phi / 64.0);
    }
}
BENCHMARK(BM_PhiSrTrial)->Arg(4)->Arg(16);

void BM_MrtPowerSumBuild(benchmark::State& state) {
    const int antennas = static_cast<int>(state.range(0));
    for (auto _ : state) {
        fading::MrtPowerSum sum(kKarasawa, antennas);
        benchmark::DoNotOptimize(sum.total_mass());
    }
}
BENCHMARK(BM_MrtPowerSumBuild)->Arg(8)->Arg(16);

void BM_InverseMoment(benchmark::State& state) {
    const fading::MrtPowerSum sum(kKarasawa, static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(sum.inverse_moment(2));
    }
}
BENCHMARK(BM_InverseMoment)->Arg(8)->Arg(16);

void BM_SfftRoundtrip(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const otfs::Grid grid{n, n, {}, {}};
    RandomStream rng(4, 0);
    otfs::DDFrame x = otfs::DDFrame::zeros(grid);
    for (auto& z : x.values) z = rng.circular_normal(1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(otfs::sfft(otfs::isfft(x, 1.0)));
    }
}
BENCHMARK(BM_SfftRoundtrip)->Arg(8)->Arg(16)->Arg(64);

void BM_ZfEqualize(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const otfs::Grid grid{n, n, {}, {}};
    RandomStream rng(5, 0);
    const std::vector<otfs::DDPath> paths{{1, 2, {0.9, 0.1}}, {n - 1, n / 2, {0.3, -0.5}}};
    const auto gains = otfs::bin_gains_from_paths(paths, grid);
    otfs::DDFrame y = otfs::DDFrame::zeros(grid);
    for (auto& z : y.values) z = rng.circular_normal(1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(otfs::zf_equalize(y, gains));
    }
}
BENCHMARK(BM_ZfEqualize)->Arg(8)->Arg(16);

void BM_RegGammaUpper(benchmark::State& state) {
    double x = 300.0;
    for (auto _ : state) {
        x = x >= 400.0 ? 300.0 : x + 1.0;
        benchmark::DoNotOptimize(special::reg_gamma_upper(384.0, x));
    }
}
BENCHMARK(BM_RegGammaUpper);

void BM_OpCurvePoint(benchmark::State& state) {
    const otfs::Grid grid{8, 8, {}, {}};
    const auto stats = outage::phi_sr_stats(kFhs, 16, grid);
    const auto gamma = outage::gamma_approx(fading::ig_from_nakagami({8.0, 1.0}), grid);
    outage::LinkBudget b;
    double snr = -6.0;
    for (auto _ : state) {
        snr = snr >= 6.0 ? -6.0 : snr + 0.1;
        b.set_average_snr_db(snr);
        const double p1 = outage::op_link_sr(stats, b);
        const double p2 = outage::op_link_nakagami(gamma, b);
        benchmark::DoNotOptimize(outage::op_end_to_end(p1, p2));
    }
}
BENCHMARK(BM_OpCurvePoint);

}  // namespace

BENCHMARK_MAIN();
