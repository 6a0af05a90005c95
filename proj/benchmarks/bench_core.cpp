#include <benchmark/benchmark.h>

#include "topochain/scan.hpp"

using namespace topochain;

namespace {

void BM_sample_bands(benchmark::State& state) {
    const BlochModel model = ssh_bloch(1.0, -0.5);
    const BZGrid grid = make_bz_grid(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(sample_bands(model, grid));
}
BENCHMARK(BM_sample_bands)->Arg(128)->Arg(512)->Arg(2048);

void BM_winding(benchmark::State& state) {
    const BlochModel model = cl_bloch(1.0, M_PI / 2, 1.0);
    const BZGrid grid = make_bz_grid(512);
    for (auto _ : state) benchmark::DoNotOptimize(winding_number(model, grid));
}
BENCHMARK(BM_winding);

void BM_eig_hermitian(benchmark::State& state) {
    const int L = static_cast<int>(state.range(0));
    const Eigen::MatrixXcd H = build_open_chain(ssh_bloch(1.0, -0.5), L).H;
    for (auto _ : state) benchmark::DoNotOptimize(eig_hermitian(H));
}
BENCHMARK(BM_eig_hermitian)->Arg(32)->Arg(100)->Arg(256);

void BM_occupations_from_modes(benchmark::State& state) {
    const EigResult modes = eig_hermitian(build_open_chain(ssh_bloch(1.0, -0.5), 100).H);
    for (auto _ : state)
        benchmark::DoNotOptimize(occupations_from_modes(modes, 5.0, 0.1));
}
BENCHMARK(BM_occupations_from_modes);

void BM_geometric_phase_discrete(benchmark::State& state) {
    const MixedPath path =
        build_mixed_path(ssh_bloch(1.0, -0.5), make_bz_grid(512), 5.0, 0.1);
    for (auto _ : state) benchmark::DoNotOptimize(geometric_phase_discrete(path));
}
BENCHMARK(BM_geometric_phase_discrete);

void BM_scan_column(benchmark::State& state) {
    // one full alpha column of the shipped sweep: bands + winding + chain
    // eigenbasis once, then 51 beta evaluations
    ScanConfig c;
    c.alpha_min = c.alpha_max = -0.5;
    c.alpha_count = 1;
    c.beta_min = 0.2;
    c.beta_max = 10.0;
    c.beta_count = 50;
    c.include_zero = true;
    for (auto _ : state) benchmark::DoNotOptimize(run_scan(c, 1));
}
BENCHMARK(BM_scan_column)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
