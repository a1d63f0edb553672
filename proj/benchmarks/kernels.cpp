#include "cvsheet/diagnostics.hpp"
#include "cvsheet/flat_strip.hpp"
#include "cvsheet/presets.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

namespace {

using namespace cvs;

SimState packet_state(int n1, int n2) {
    RunConfig c = preset_config("alfven-stable");
    c.n1 = n1;
    c.n2 = n2;
    InitialData d = build_initial(c);
    return make_state(std::move(d.surface), std::move(d.vort), d.background, c.model());
}

void fft_derivative(benchmark::State& st) {
    const Grid1D grid(static_cast<int>(st.range(0)), 64.0);
    std::vector<double> g(grid.n());
    for (int j = 0; j < grid.n(); ++j) g[j] = std::exp(-grid.point(j) * grid.point(j) / 16.0);
    derivative(grid, g);  // plan creation stays outside the timed loop
    for (auto _ : st) benchmark::DoNotOptimize(derivative(grid, g));
    st.SetComplexityN(st.range(0));
}
BENCHMARK(fft_derivative)->RangeMultiplier(2)->Range(64, 4096)->Complexity(benchmark::oNLogN);

void mapped_gradient(benchmark::State& st) {
    const int n1 = static_cast<int>(st.range(0));
    const SimState s = packet_state(n1, 33);
    const MetricTerms& m = s.strips->lower_metric;
    for (auto _ : st) benchmark::DoNotOptimize(m.gradient(s.elsasser.lam_plus.c1));
}
BENCHMARK(mapped_gradient)->Arg(128)->Arg(256)->Arg(512);

void flat_layer_solve(benchmark::State& st) {
    const Grid1D grid(static_cast<int>(st.range(0)), 64.0);
    const FlatLayerSolver solver(grid, 33, 1.0, BcKind::neumann, BcKind::dirichlet, false);
    std::vector<double> rhs(solver.size()), out(solver.size());
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = std::sin(0.01 * static_cast<double>(i));
    for (auto _ : st) {
        solver.solve(rhs, out);
        benchmark::DoNotOptimize(out.data());
    }
}
BENCHMARK(flat_layer_solve)->Arg(128)->Arg(256)->Arg(512);

void pressure_solve(benchmark::State& st) {
    const SimState s = packet_state(static_cast<int>(st.range(0)), 33);
    for (auto _ : st) benchmark::DoNotOptimize(solve_pressure(s.elsasser, s.surface, *s.strips));
}
BENCHMARK(pressure_solve)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void rk4_step(benchmark::State& st) {
    const int n1 = static_cast<int>(st.range(0));
    const SimState s = packet_state(n1, 33);
    ModelConfig model;
    model.n2 = 33;
    const double dt = cfl_dt(s, 0.4);
    for (auto _ : st) benchmark::DoNotOptimize(advance_rk4(s, dt, model));
}
BENCHMARK(rk4_step)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void energy_report_eval(benchmark::State& st) {
    const SimState s = packet_state(static_cast<int>(st.range(0)), 33);
    const DiagnosticsConfig cfg;
    for (auto _ : st) benchmark::DoNotOptimize(energy_report(s, cfg));
}
BENCHMARK(energy_report_eval)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
