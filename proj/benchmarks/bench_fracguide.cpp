#include "fracguide/aiming.hpp"
#include "fracguide/fde_solver.hpp"
#include "fracguide/frac_core.hpp"
#include "fracguide/scenario.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace fracguide;

static void BM_RlIntegral(benchmark::State& state) {
    const TimeGrid g = TimeGrid::uniform(1.0, static_cast<std::size_t>(state.range(0)));
    const GridFunction phi = GridFunction::sample(g, 2, [](double t) {
        Eigen::VectorXd v(2);
        v << std::cos(t), t;
        return v;
    });
    for (auto _ : state) benchmark::DoNotOptimize(rl_integral(FracOrder(0.5), phi));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_RlIntegral)->RangeMultiplier(2)->Range(512, 8192)->Complexity(benchmark::oNSquared);

static void BM_SolveEuler(benchmark::State& state) {
    const RhsFunction rhs([](double t, const Vector& x) {
        Vector g(2);
        g << x[1], -std::sin(x[0]) + std::cos(t);
        return g;
    }, 2, 2.0);
    Vector x0(2);
    x0 << -1.0, 0.0;
    const CauchyProblem p(rhs, FracOrder(0.5), x0, 5.0);
    const TimeGrid g = TimeGrid::uniform(5.0, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(solve_euler(p, g));
}
BENCHMARK(BM_SolveEuler)->RangeMultiplier(2)->Range(1024, 8192);

static void BM_RunAimingPaper(benchmark::State& state) {
    Scenario s = paper_scenario(42);
    s.step = 5.0 / static_cast<double>(state.range(0));
    const AimingConfig c = s.build();
    for (auto _ : state) benchmark::DoNotOptimize(run_aiming(c));
}
BENCHMARK(BM_RunAimingPaper)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_MittagLeffler(benchmark::State& state) {
    double z = -3.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(mittag_leffler(0.5, z));
        z = z > 8.0 ? -3.0 : z + 0.01;
    }
}
BENCHMARK(BM_MittagLeffler);

BENCHMARK_MAIN();
