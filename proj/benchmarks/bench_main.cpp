#include <benchmark/benchmark.h>

#include "hrl/discretize.hpp"
#include "hrl/halfline.hpp"
#include "hrl/interval.hpp"
#include "hrl/partition.hpp"
#include "hrl/spectral.hpp"
#include "hrl/sphere3d.hpp"

using namespace hrl;

namespace {

const FormSpec kHardy = FormSpec::bilaplacian_hardy(critical_hardy());
const Potential kStep = Potential::step(1.0, 2.0, 200.0);

// first cell fixed at 1e-6: a fixed ratio would drive it below 1e-15 at 4096 cells
Mesh mesh_for(benchmark::State& s) {
    const auto n = static_cast<std::size_t>(s.range(0));
    return build_mesh(0.0, 5.0, n, grading_for_first_cell(0.0, 5.0, n, 1e-6));
}

void BM_Assemble(benchmark::State& s) {
    const auto mesh = mesh_for(s);
    for (auto _ : s) benchmark::DoNotOptimize(assemble(kHardy, mesh, BoundaryCondition::clamped_both, kStep));
    s.SetComplexityN(s.range(0));
}
BENCHMARK(BM_Assemble)->RangeMultiplier(4)->Range(64, 4096)->Complexity(benchmark::oN);

void BM_InertiaCount(benchmark::State& s) {
    const auto sys = assemble(kHardy, mesh_for(s), BoundaryCondition::clamped_both, kStep);
    for (auto _ : s) benchmark::DoNotOptimize(negative_count(sys.K, sys.M_V, sys.M));
    s.SetComplexityN(s.range(0));
}
BENCHMARK(BM_InertiaCount)->RangeMultiplier(4)->Range(64, 4096)->Complexity(benchmark::oN);

void BM_NegativeEigenvalues(benchmark::State& s) {
    const auto sys = assemble(kHardy, mesh_for(s), BoundaryCondition::clamped_both, kStep);
    for (auto _ : s) benchmark::DoNotOptimize(negative_eigenvalues(sys.K, sys.M_V, sys.M));
}
BENCHMARK(BM_NegativeEigenvalues)->RangeMultiplier(4)->Range(64, 4096)->Unit(benchmark::kMillisecond);

void BM_VerifyHalfline(benchmark::State& s) {
    const auto mesh = halfline_mesh(kStep, {static_cast<std::size_t>(s.range(0)), 0.0, 1.01});
    for (auto _ : s) benchmark::DoNotOptimize(verify_inequality(kHardy, kStep, 0.0, 0.75, mesh));
}
BENCHMARK(BM_VerifyHalfline)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_Verify3d(benchmark::State& s) {
    Options3d opt;
    opt.threads = static_cast<std::size_t>(s.range(0));
    const auto v = RadialPotential::radial(kStep);
    for (auto _ : s) benchmark::DoNotOptimize(verify_3d(v, 0.75, opt));
}
BENCHMARK(BM_Verify3d)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_Partition(benchmark::State& s) {
    const auto v = Potential::bump(0.5, 4.0, 300.0, 0.3);
    for (auto _ : s) benchmark::DoNotOptimize(compute_partition(v, 0.0, 0.3));
}
BENCHMARK(BM_Partition)->Unit(benchmark::kMillisecond);

void BM_EstimateC(benchmark::State& s) {
    const auto mesh = interval_mesh(1.0, static_cast<std::size_t>(s.range(0)));
    for (auto _ : s) benchmark::DoNotOptimize(estimate_C(1.0, identity_alpha(), 1.5, 0.0, mesh));
}
BENCHMARK(BM_EstimateC)->Arg(48)->Arg(96)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
