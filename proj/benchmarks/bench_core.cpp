#include <benchmark/benchmark.h>

#include "skinlat/circuit.hpp"
#include "skinlat/eig.hpp"
#include "skinlat/localization.hpp"
#include "skinlat/model.hpp"
#include "skinlat/spectra.hpp"
#include "skinlat/topo.hpp"

using namespace skinlat;

namespace {

ModelParams nonreciprocal(int l, Boundary b) {
    ModelParams p;
    p.j1a = 1.0;
    p.j2a = 1.6;
    p.j1b = 1.6;
    p.j2b = 1.1;
    p.u = 5.0;
    p.l = l;
    p.boundary = b;
    return p;
}

void BM_BuildHamiltonian(benchmark::State& state) {
    const auto p = nonreciprocal(static_cast<int>(state.range(0)), Boundary::Periodic);
    for (auto _ : state) benchmark::DoNotOptimize(build_two_body_hamiltonian(p));
}
BENCHMARK(BM_BuildHamiltonian)->Arg(10)->Arg(20)->Arg(40);

void BM_EigHermitian(benchmark::State& state) {
    const auto h = build_two_body_hamiltonian(ModelParams::uniform(1.6, 10.0, static_cast<int>(state.range(0)), Boundary::Open));
    for (auto _ : state) benchmark::DoNotOptimize(eigendecompose(h));
    state.SetComplexityN(h.rows());
}
BENCHMARK(BM_EigHermitian)->Arg(8)->Arg(12)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond)->Complexity(benchmark::oNCubed);

void BM_EigGeneral(benchmark::State& state) {
    const auto h = build_two_body_hamiltonian(nonreciprocal(static_cast<int>(state.range(0)), Boundary::Open));
    for (auto _ : state) benchmark::DoNotOptimize(eigendecompose(h));
    state.SetComplexityN(h.rows());
}
BENCHMARK(BM_EigGeneral)->Arg(8)->Arg(12)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond)->Complexity(benchmark::oNCubed);

void BM_BoundStateBranch(benchmark::State& state) {
    const auto p = nonreciprocal(20, Boundary::Periodic);
    std::vector<double> ks;
    for (int i = 0; i < state.range(0); ++i) ks.push_back(-3.14159 + 6.28318 * i / state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(bound_state_branch(p, ks, GreenKernel::InfiniteChain));
}
BENCHMARK(BM_BoundStateBranch)->Arg(64)->Arg(256);

void BM_Winding(benchmark::State& state) {
    const auto p = nonreciprocal(20, Boundary::Periodic);
    for (auto _ : state) benchmark::DoNotOptimize(winding_number(free_loop_over_big_k(p, 0.0)));
}
BENCHMARK(BM_Winding);

void BM_DensityAndFit(benchmark::State& state) {
    const auto p = ModelParams::uniform(1.0, 10.0, 21, Boundary::Open);
    const auto sol = eigendecompose(build_two_body_hamiltonian(p));
    for (auto _ : state) {
        const auto d = density(sol.right_vectors.col(0), p.l);
        benchmark::DoNotOptimize(fit_scaling_factor(relative_cut(d, 11), FitSide::Both));
        benchmark::DoNotOptimize(find_maxima(d));
    }
}
BENCHMARK(BM_DensityAndFit);

void BM_GapScan(benchmark::State& state) {
    ExtendedParams e;
    e.u = 25.0;
    std::vector<cplx> ps;
    for (int i = 0; i < 32; ++i) ps.emplace_back(-3.0 + 6.0 * i / 31.0);
    for (auto _ : state) benchmark::DoNotOptimize(gap_scan(e, ps));
}
BENCHMARK(BM_GapScan)->Unit(benchmark::kMillisecond);

void BM_CircuitPipeline(benchmark::State& state) {
    const auto p = ModelParams::uniform(1.6, 10.0, static_cast<int>(state.range(0)), Boundary::Periodic);
    const auto h = build_two_body_hamiltonian(p);
    for (auto _ : state) {
        const auto comp = solve_components(p, 1.0, 1.0);
        benchmark::DoNotOptimize(verify_equivalence(build_laplacian(comp, p), h, 1.0, 1.0));
    }
}
BENCHMARK(BM_CircuitPipeline)->Arg(6)->Arg(12);

}  // namespace
BENCHMARK_MAIN();
