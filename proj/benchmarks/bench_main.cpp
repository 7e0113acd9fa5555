#include <benchmark/benchmark.h>

#include <cmath>

#include "cuspforge/cusp_generator.hpp"
#include "cuspforge/field_ops.hpp"
#include "cuspforge/hodograph.hpp"
#include "cuspforge/qc_diagnostics.hpp"
#include "cuspforge/thin_obstacle.hpp"

using namespace cuspforge;

namespace {

Grid obstacle_box(int cells) {
    return Grid::with_spacing(-1, 0, 1.0 / cells, 2 * cells + 1, cells + 1, HalfPlane::upper);
}

const OnePhaseSolution& solution_257() {
    static const OnePhaseSolution s = generate_onephase(CuspSpec(1), 0.5, 257);
    return s;
}

}  // namespace

static void BM_BuildV(benchmark::State& state) {
    const CuspSpec spec(1);
    const int res = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(build_v(spec, 0.5, res));
    state.SetComplexityN(state.range(0) * state.range(0));
}
BENCHMARK(BM_BuildV)->Arg(65)->Arg(129)->Arg(257)->Unit(benchmark::kMillisecond)->Complexity();

static void BM_SolveEta(benchmark::State& state) {
    const CuspSpec spec(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(solve_eta(spec, -0.25, 2.5e-4));
}
BENCHMARK(BM_SolveEta)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

static void BM_GenerateOnePhase(benchmark::State& state) {
    const int res = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(generate_onephase(CuspSpec(1), 0.5, res));
}
BENCHMARK(BM_GenerateOnePhase)->Arg(129)->Arg(257)->Unit(benchmark::kMillisecond);

static void BM_Gradient(benchmark::State& state) {
    const int cells = static_cast<int>(state.range(0));
    const ScalarField u = ScalarField::sample(obstacle_box(cells), signorini32);
    for (auto _ : state) benchmark::DoNotOptimize(gradient(u));
    state.SetComplexityN(static_cast<long>(u.grid.size()));
}
BENCHMARK(BM_Gradient)->RangeMultiplier(2)->Range(32, 256)->Complexity();

static void BM_EnergyGradient(benchmark::State& state) {
    const int cells = static_cast<int>(state.range(0));
    const ObstacleProblem p = make_problem(obstacle_box(cells), Nonlinearity::rational_bernoulli(),
                                           [](double x, double y) { return 0.06 * signorini32(x, y); });
    const ScalarField v = initial_guess(p);
    for (auto _ : state) benchmark::DoNotOptimize(energy_gradient(p, v));
    state.SetComplexityN(static_cast<long>(p.grid.size()));
}
BENCHMARK(BM_EnergyGradient)->RangeMultiplier(2)->Range(32, 256)->Complexity();

static void BM_SignoriniSolve(benchmark::State& state) {
    const int cells = static_cast<int>(state.range(0));
    const ObstacleProblem p = make_problem(obstacle_box(cells), Nonlinearity::quadratic(), signorini32);
    SolveOptions o;
    o.levels = 3;
    for (auto _ : state) benchmark::DoNotOptimize(solve(p, initial_guess(p), o));
}
BENCHMARK(BM_SignoriniSolve)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

static void BM_ConformalForward(benchmark::State& state) {
    const OnePhaseSolution& s = solution_257();
    for (auto _ : state) benchmark::DoNotOptimize(conformal_forward(s.u, s.boundary));
}
BENCHMARK(BM_ConformalForward)->Unit(benchmark::kMillisecond);

static void BM_Beltrami(benchmark::State& state) {
    const ScalarField u = ScalarField::sample(obstacle_box(64), signorini32);
    const Nonlinearity F = Nonlinearity::rational_bernoulli().normalized();
    // Scaled down so the Hessian stays in the small-gradient regime.
    ScalarField small = u;
    for (double& x : small.values) x *= 0.06;
    for (auto _ : state) benchmark::DoNotOptimize(beltrami(small, F));
}
BENCHMARK(BM_Beltrami)->Unit(benchmark::kMillisecond);

static void BM_BranchPoints(benchmark::State& state) {
    const OnePhaseSolution& s = solution_257();
    for (auto _ : state) benchmark::DoNotOptimize(branch_points(s.u, BranchCondition::one_phase));
}
BENCHMARK(BM_BranchPoints)->Unit(benchmark::kMicrosecond);

static void BM_LineIntegral(benchmark::State& state) {
    const Grid g = obstacle_box(128);
    const ScalarField a = ScalarField::sample(g, [](double x, double y) { return std::cos(x) * y; });
    const ScalarField b = ScalarField::sample(g, [](double x, double y) { return std::sin(x + y); });
    const Path loop{{{-0.9, 0.1}, {0.9, 0.1}, {0.9, 0.9}, {-0.9, 0.9}}, true};
    for (auto _ : state) benchmark::DoNotOptimize(line_integral(a, b, loop));
}
BENCHMARK(BM_LineIntegral)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
