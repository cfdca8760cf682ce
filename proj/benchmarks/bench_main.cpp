#include <benchmark/benchmark.h>

#include <cmath>

#include "qtrap/closed_form.hpp"
#include "qtrap/direct_integral.hpp"
#include "qtrap/discrete_solver.hpp"
#include "qtrap/dynamics.hpp"
#include "qtrap/kinematics.hpp"

using namespace qtrap;
namespace ds = qtrap::discrete_solver;

namespace {

WaveFunction packet(const Grid& grid, double x0, double sigma, double p0) {
    CVector v(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double d = (grid.point(j) - x0) / sigma;
        v[j] = std::exp(-0.25 * d * d) * std::polar(1.0, p0 * grid.point(j));
    }
    return WaveFunction(grid, std::move(v)).normalize();
}

void BM_DirichletEigensolve(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto op = ds::assemble(Grid::interior(Interval(0.0, kPi), n), ds::potential::Zero{}, Dirichlet{});
    for (auto _ : state) benchmark::DoNotOptimize(ds::eigensolve(op, 10));
}
BENCHMARK(BM_DirichletEigensolve)->Arg(500)->Arg(2000)->Arg(8000);

void BM_QuasiPeriodicEigensolve(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto op = ds::assemble(Grid::periodic(Interval(0.0, kPi), n), ds::potential::Zero{}, QuasiPeriodic(1.0));
    for (auto _ : state) benchmark::DoNotOptimize(ds::eigensolve(op, 10));
}
BENCHMARK(BM_QuasiPeriodicEigensolve)->Arg(128)->Arg(512);

void BM_CrankNicolson(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Grid grid = Grid::interior(Interval(0.0, kPi), n);
    const auto prop = dynamics::Propagator::crank_nicolson(ds::assemble(grid, ds::potential::Zero{}, Dirichlet{}), 1e-3);
    const WaveFunction psi0 = packet(grid, kPi / 2, 0.3, 5.0);
    for (auto _ : state) benchmark::DoNotOptimize(dynamics::evolve(prop, psi0, 0.1));
    state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_CrankNicolson)->Arg(511)->Arg(4095);

void BM_FourierTransform(benchmark::State& state) {
    const Grid grid = Grid::interior(Interval(0.0, kPi), 4000);
    const WaveFunction f = closed_form::well_mode(0).sample(grid).normalize();
    const auto p = kinematics::symmetric_momenta(40.0, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(kinematics::fourier_transform(f, p));
}
BENCHMARK(BM_FourierTransform)->Arg(801)->Arg(8001);

void BM_Decompose(benchmark::State& state) {
    const Grid line = direct_integral::line_grid(-3, 5, 128);
    const WaveFunction f = packet(line, kPi, 0.4, 2.0);
    const auto m = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(direct_integral::reconstruct(direct_integral::decompose(f, m)));
}
BENCHMARK(BM_Decompose)->Arg(16)->Arg(64);

}  // namespace
BENCHMARK_MAIN();
