#include "ribbonlab/geometry.hpp"
#include "ribbonlab/plate.hpp"
#include "ribbonlab/relaxation.hpp"
#include "ribbonlab/rod.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace ribbonlab;

static void BM_RelaxThickness(benchmark::State &state) {
    relaxation::QuadratureOptions opts;
    opts.order = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(relaxation::relax_thickness(material::Twist{}, {}, opts));
}
BENCHMARK(BM_RelaxThickness)->Arg(8)->Arg(16)->Arg(32);

static void BM_RelaxThicknessOracle(benchmark::State &state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(relaxation::relax_thickness_oracle(material::Twist{}, {}, n));
}
BENCHMARK(BM_RelaxThicknessOracle)->Arg(8)->Arg(16)->Arg(32);

static void BM_MinimizeOverCylinders(benchmark::State &state) {
    const auto model = relaxation::relax_thickness(material::Twist{}, {});
    const auto form = relaxation::Quadratic2::from(model.params);
    plate::CylinderSearch search;
    search.scan_samples = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(plate::minimize_over_cylinders(model, form, {}, search));
}
BENCHMARK(BM_MinimizeOverCylinders)->Arg(500)->Arg(2000);

static void BM_RodMinBrute(benchmark::State &state) {
    const auto density = rod::RodDensity::make(pi / 4);
    const int grid = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(rod::rod_min_brute(density, grid));
}
BENCHMARK(BM_RodMinBrute)->Arg(101)->Arg(301)->Unit(benchmark::kMillisecond);

static void BM_Rescaled3DEnergy(benchmark::State &state) {
    const double kappa = 6 / (pi * pi * 1.3);
    const plate::AnsatzDeformation ansatz{
        plate::CylindricalIsometry::constant(0, -kappa, plate::PlateDomain{2, 1, 0}),
        static_cast<int>(state.range(0)), 1e-2};
    for (auto _ : state) benchmark::DoNotOptimize(plate::rescaled_3d_energy(ansatz, material::Twist{}, {}));
}
BENCHMARK(BM_Rescaled3DEnergy)->Arg(0)->Arg(2)->Unit(benchmark::kMillisecond);

static void BM_IntegrateFrame(benchmark::State &state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(geometry::integrate_frame(0.2, 0.3, Mat3::Identity(), 10, n));
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_IntegrateFrame)->Arg(400)->Arg(10001);

static void BM_IntegrateFrameVariable(benchmark::State &state) {
    const int n = static_cast<int>(state.range(0));
    const auto flex = [](double s) { return 0.2 * std::sin(s); };
    const auto tors = [](double) { return 0.3; };
    for (auto _ : state) benchmark::DoNotOptimize(geometry::integrate_frame(flex, tors, Mat3::Identity(), 10, n));
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_IntegrateFrameVariable)->Arg(400)->Arg(10001);

static void BM_CylinderMesh(benchmark::State &state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(geometry::cylinder_mesh(0, 0.467636, plate::PlateDomain{}, 201, 9));
}
BENCHMARK(BM_CylinderMesh);
BENCHMARK_MAIN();
