#include <cmath>
#include <vector>

#include <benchmark/benchmark.h>

#include "infheat/barriers.hpp"
#include "infheat/certify.hpp"
#include "infheat/scheme.hpp"

using namespace infheat;

namespace {

const BoundaryData kZero = [](std::span<const double>, double) { return 0.0; };
const BoundaryData kDistance = [](std::span<const double> x, double) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
};

// Full march of the n = 1 heat problem; arg = 1 / h.
void BM_March1D(benchmark::State& state) {
    SchemeConfig cfg;
    cfg.h = 1.0 / static_cast<double>(state.range(0));
    const Region cyl = Region::cylinder(SpatialShape::box({0.0}, {3.14159}), 0.0, 0.1);
    const BoundaryData g = [](std::span<const double> x, double t) { return std::exp(-t) * std::sin(x[0]); };
    const auto lat = make_lattice(cyl, cfg);
    std::size_t nodes = 0;
    for (auto _ : state) {
        std::size_t slices = 0;
        march_stream(*lat, g, [&](std::size_t, const SliceView&) { return ++slices > 0; });
        nodes += lat->grid().size() * slices;
    }
    state.counters["nodes/s"] = benchmark::Counter(static_cast<double>(nodes), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_March1D)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

// A few slices on a disc; arg = number of sphere directions.
void BM_March2DBall(benchmark::State& state) {
    SchemeConfig cfg;
    cfg.h = 0.02;
    cfg.K = 2;
    cfg.dirs = static_cast<int>(state.range(0));
    const Region cyl = Region::cylinder(SpatialShape::ball({0.0, 0.0}, 1.0), 0.0, 0.02);
    const auto lat = make_lattice(cyl, cfg);
    for (auto _ : state) {
        std::size_t slices = 0;
        march_stream(*lat, kDistance, [&](std::size_t, const SliceView&) { return ++slices > 0; });
        benchmark::DoNotOptimize(slices);
    }
}
BENCHMARK(BM_March2DBall)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_SphereValues(benchmark::State& state) {
    const Grid grid({-1.0, -1.0}, 0.01, {201, 201});
    const Stencil st(grid, 4, static_cast<int>(state.range(0)), {-1.0, -1.0}, {1.0, 1.0});
    std::vector<double> vals(grid.size());
    std::vector<std::uint8_t> mask(grid.size(), 1);
    std::vector<double> x(2);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        grid.position(i, x);
        vals[i] = x[0] * x[0] - 0.5 * x[1];
    }
    const SliceView view{0.0, vals.data(), mask.data()};
    const std::vector<double> p{0.1234, -0.321};
    for (auto _ : state) benchmark::DoNotOptimize(st.sphere_values(view, kZero, p));
}
BENCHMARK(BM_SphereValues)->Arg(16)->Arg(64);

void BM_StationarySolve(benchmark::State& state) {
    SchemeConfig cfg;
    cfg.h = 1.0 / static_cast<double>(state.range(0));
    const SpatialData phi = [](std::span<const double> x) { return std::abs(x[0]); };
    for (auto _ : state) {
        auto r = stationary_solve(SpatialShape::box({0.0}, {1.0}), -1.0, phi, cfg);
        benchmark::DoNotOptimize(r.iterations);
    }
}
BENCHMARK(BM_StationarySolve)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_CertifyPetrovsky(benchmark::State& state) {
    const auto form = petrovsky_barrier(1, 0.25);
    const Region region = Region::petrovsky(1, 4.0, 0.1);
    for (auto _ : state)
        benchmark::DoNotOptimize(certify(form, region, Side::Super, static_cast<std::size_t>(state.range(0)), 1));
}
BENCHMARK(BM_CertifyPetrovsky)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
