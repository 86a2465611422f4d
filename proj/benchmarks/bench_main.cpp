#include "dglue/linearized_solver.hpp"
#include "dglue/matching.hpp"
#include "dglue/spectrum.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <memory>

using namespace dglue;

namespace {

OrbitPtr orbit(int n, double eps) { return std::make_shared<const DelaunayOrbit>(Dimension(n), eps); }

void BM_OrbitConstruction(benchmark::State& state) {
    const double eps = state.range(0) / 100.0;
    for (auto _ : state) benchmark::DoNotOptimize(DelaunayOrbit(Dimension(4), eps).period());
}
BENCHMARK(BM_OrbitConstruction)->Arg(5)->Arg(10)->Arg(30)->Unit(benchmark::kMillisecond);

void BM_OrbitEval(benchmark::State& state) {
    const DelaunayOrbit o(Dimension(4), 0.1);
    double t = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(o.eval(t).v);
        t += 0.0137;
    }
}
BENCHMARK(BM_OrbitEval);

void BM_HarmonicBasis(benchmark::State& state) {
    const int degree = int(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(HarmonicBasis(4, degree).size());
}
BENCHMARK(BM_HarmonicBasis)->DenseRange(2, 6, 2)->Unit(benchmark::kMillisecond);

void BM_ModeSolve(benchmark::State& state) {
    const auto o = orbit(4, 0.1);
    const double r = 0.2;
    const LogGrid g = bvp_grid(*o, r, {});
    std::vector<double> f(g.size());
    for (int k = 0; k < g.size(); ++k) f[k] = std::pow(g.rho(k) / r, 1.5);
    const int degree = int(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(solve_mode_nodes(*o, 0.05, degree, g, f).values().data());
}
BENCHMARK(BM_ModeSolve)->Arg(0)->Arg(2)->Arg(4)->Unit(benchmark::kMicrosecond);

void BM_PicardInterior(benchmark::State& state) {
    const auto o = orbit(4, 0.1);
    const auto budget = ParameterBudget::defaults(Dimension(4));
    const double r = budget.r_eps(0.1);
    const int L = int(state.range(0));
    auto B = std::make_shared<const HarmonicBasis>(4, L);
    PicardOptions opt;
    opt.max_degree = L;
    opt.compute_norms = false;
    const BoundaryData phi{B, r, {{{2, 0}, 0.01}}};
    for (auto _ : state) benchmark::DoNotOptimize(picard_interior(o, 0.05, {}, phi, budget, opt).final_residual);
}
BENCHMARK(BM_PicardInterior)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->Iterations(1);

void BM_Spectrum(benchmark::State& state) {
    const auto spec = SpectrumSpec::s2xs2(3.0);
    for (auto _ : state) benchmark::DoNotOptimize(is_nondegenerate(spec).gap);
}
BENCHMARK(BM_Spectrum);

void BM_MatchSynthetic(benchmark::State& state) {
    const auto o = orbit(4, 0.1);
    const auto budget = ParameterBudget::defaults(Dimension(4));
    const auto f = DataFunctionals::synthetic(MatchingState::initial(Dimension(4), 0.1, budget));
    for (auto _ : state) benchmark::DoNotOptimize(assemble_match(o, budget, f).residual);
}
BENCHMARK(BM_MatchSynthetic)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
