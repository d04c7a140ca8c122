// Serial reference vs OpenMP kernels, plus min_corr scaling in the grid size.
// Thread count follows GEO_EXTREMAL_THREADS.

#include <benchmark/benchmark.h>

#include <vector>

#include "geoextremal/analytic.hpp"
#include "geoextremal/extremal.hpp"
#include "geoextremal/oracle.hpp"
#include "geoextremal/scan.hpp"

using namespace geoextremal;

namespace {

const std::vector<double>& scan_ps() {
    static const std::vector<double> ps = scan_grid(0.02, 0.5, 0.002);
    return ps;
}

void BM_ScanSerial(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(scan_rows_serial(scan_ps()));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(scan_ps().size()));
}

void BM_ScanParallel(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(scan_rows(scan_ps()));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(scan_ps().size()));
}

void BM_MonteCarloSerial(benchmark::State& state) {
    const GeoParam p(0.25);
    for (auto _ : state) {
        benchmark::DoNotOptimize(mc_corr_serial(p, p, state.range(0), 42, Coupling::Countermonotone));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_MonteCarloParallel(benchmark::State& state) {
    const GeoParam p(0.25);
    for (auto _ : state) {
        benchmark::DoNotOptimize(mc_corr(p, p, state.range(0), 42, Coupling::Countermonotone));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_QuadratureSerial(benchmark::State& state) {
    const GeoParam p(0.05);
    for (auto _ : state) benchmark::DoNotOptimize(quad_mean_product_serial(p, p));
}

void BM_QuadratureParallel(benchmark::State& state) {
    const GeoParam p(0.05);
    for (auto _ : state) benchmark::DoNotOptimize(quad_mean_product(p, p));
}

void BM_KinksSerial(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(enumerate_kinks_serial(0.01));
}

void BM_KinksParallel(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(enumerate_kinks(0.01));
}

// Arg is -log10(p); the grid has d1 + d2 ~ 2 p^-1 ln(p^-1) points.
void BM_MinCorrEqualP(benchmark::State& state) {
    double p = 1.0;
    for (int k = 0; k < state.range(0); ++k) p /= 10.0;
    const GeoParam gp(p);
    std::int64_t points = 0;
    for (auto _ : state) {
        const CorrResult r = min_corr(gp, gp);
        points = r.n_breakpoints;
        benchmark::DoNotOptimize(r);
    }
    state.counters["breakpoints"] = static_cast<double>(points);
    state.SetItemsProcessed(state.iterations() * points);
}

}  // namespace

BENCHMARK(BM_ScanSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ScanParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MonteCarloSerial)->Arg(1 << 20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MonteCarloParallel)->Arg(1 << 20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_QuadratureSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_QuadratureParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KinksSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KinksParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MinCorrEqualP)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
