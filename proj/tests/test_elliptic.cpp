#include "support.hpp"

#include "oracles.hpp"

#include "cvsheet/errors.hpp"
#include "cvsheet/mixed_bvp.hpp"
#include "cvsheet/presets.hpp"
#include "cvsheet/surface.hpp"

#include <doctest.h>

using namespace cvs;
using cvs::test::max_diff;
using cvs::test::sample;
using cvs::test::two_pi;

namespace {

double inner(const Grid1D& grid, std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * b[j];
    return s * grid.spacing();
}

// Smooth state with both families and all layers active.
SimState busy_state(const Grid1D& grid, int n2 = 33) {
    SurfaceState s(grid);
    s.f.samples = sample(grid, [](double x) { return 0.2 * std::sin(x) + 0.05 * std::cos(2.0 * x); });
    s.v.samples = sample(grid, [](double x) { return 0.1 * std::cos(x); });
    VorticityState w(grid.n(), n2);
    for (int j2 = 0; j2 < n2; ++j2)
        for (int j1 = 0; j1 < grid.n(); ++j1) {
            const double x = grid.point(j1);
            w.plus(j2, j1) = 0.2 * std::sin(x);
            w.minus(j2, j1) = 0.1 * std::cos(2.0 * x);
            w.hat_plus(j2, j1) = -0.1 * std::cos(x);
            w.hat_minus(j2, j1) = 0.15 * std::sin(2.0 * x);
        }
    ModelConfig model;
    model.n2 = n2;
    return make_state(s, w, Background::shear(0.3, 1.0), model);
}

}  // namespace

TEST_SUITE("elliptic") {

TEST_CASE("jump data vanishes for zero traces and for matching layers") {
    const Grid1D grid(64, two_pi);
    SurfaceState s(grid);
    s.f.samples = sample(grid, [](double x) { return 0.3 * std::sin(x); });
    s.v.samples = sample(grid, [](double x) { return 0.2 * std::cos(3.0 * x); });
    CHECK(max_abs(assemble_jump(s, TraceBundle::zeros(64)).g_jump) == 0.0);
    TraceBundle t = TraceBundle::zeros(64);
    t.lam_plus1 = oracle::random_modes(grid, 1, 0, 5, 0.4);
    t.lam_minus1 = oracle::random_modes(grid, 1, 1, 5, 0.4);
    t.hat_plus1 = t.lam_plus1;
    t.hat_minus1 = t.lam_minus1;
    CHECK(max_abs(assemble_jump(s, t).g_jump) < 1e-15);
}

TEST_CASE("jump data against a closed-form expansion for single-mode data") {
    // f = a sin x, v = b cos 2x, traces single cosines; every derivative is taken by hand.
    const Grid1D grid(64, two_pi);
    const double a = 0.3, b = 0.2;
    SurfaceState s(grid);
    s.f.samples = sample(grid, [&](double x) { return a * std::sin(x); });
    s.v.samples = sample(grid, [&](double x) { return b * std::cos(2.0 * x); });
    auto lp = [](double x) { return 0.5 * std::cos(x); };
    auto lm = [](double x) { return -0.2 * std::sin(2.0 * x); };
    auto hp = [](double) { return 0.1; };
    auto hm = [](double x) { return 0.3 * std::cos(x); };
    TraceBundle t = TraceBundle::zeros(64);
    t.lam_plus1 = sample(grid, lp);
    t.lam_minus1 = sample(grid, lm);
    t.hat_plus1 = sample(grid, hp);
    t.hat_minus1 = sample(grid, hm);
    const auto g = assemble_jump(s, t).g_jump;
    for (int j = 0; j < grid.n(); ++j) {
        const double x = grid.point(j);
        const double fpp = -a * std::sin(x);
        const double d_minus = -2.0 * b * std::sin(2.0 * x) + a * std::sin(x);  // d1 (v - f')
        const double d_plus = -2.0 * b * std::sin(2.0 * x) - a * std::sin(x);   // d1 (v + f')
        const double expect = -(lp(x) * lm(x) - hp(x) * hm(x)) * fpp - (lp(x) - hp(x)) * d_minus -
                              (lm(x) - hm(x)) * d_plus;
        CHECK(std::abs(g[j] - expect) < 1e-12);
    }
}

TEST_CASE("zero perturbation gives zero pressure") {
    const Grid1D grid(32, two_pi);
    const SimState st = test::background_state(grid, Background::shear(0.0, 1.0));
    CHECK(st.pressure.p.max_abs() < 1e-14);
    CHECK(st.pressure.p_hat.max_abs() < 1e-14);
    CHECK(max_abs(pressure_identity_residual(st.pressure, st.elsasser, *st.strips)) < 1e-14);
}

TEST_CASE("one-sided data gives vanishing pressure") {
    RunConfig c = preset_config("alfven-packet");
    c.n1 = 128;
    const InitialData init = build_initial(c);
    const SimState st = make_state(init.surface, init.vort, init.background, c.model());
    CHECK(st.elsasser.lam_minus.max_abs() < 1e-12);
    CHECK(st.pressure.p.max_abs() < 1e-9);
    CHECK(st.pressure.p_hat.max_abs() < 1e-9);
}

TEST_CASE("pressure solve reports small residuals and satisfies the identity") {
    const Grid1D grid(64, two_pi);
    const SimState st = busy_state(grid);
    PressureReport report;
    PressureOptions opt;
    opt.tolerance = 1e-10;
    const PressurePair pp = solve_pressure(st.elsasser, st.surface, *st.strips, opt, &report);
    CHECK(report.stats.converged);
    const double scale = st.elsasser.max_abs() * st.elsasser.max_abs();
    CHECK(report.continuity < 1e-10 * scale);
    CHECK(report.wall < 1e-7 * scale);
    CHECK(report.jump < 1e-7 * scale);
    CHECK(report.interior < 1e-7 * scale);
    CHECK(max_abs(pressure_identity_residual(pp, st.elsasser, *st.strips)) < 1e-8);
}

TEST_CASE("adding a constant to the pressure shifts the identity by twice that constant") {
    const Grid1D grid(64, two_pi);
    const SimState st = busy_state(grid);
    const auto base = pressure_identity_residual(st.pressure, st.elsasser, *st.strips);
    PressurePair shifted = st.pressure;
    const double c = 0.37;
    for (double& v : shifted.p.data) v += c;
    for (double& v : shifted.p_hat.data) v += c;
    const auto moved = pressure_identity_residual(shifted, st.elsasser, *st.strips);
    for (std::size_t j = 0; j < base.size(); ++j) CHECK(moved[j] - base[j] == doctest::Approx(2.0 * c).epsilon(1e-12));
}

TEST_CASE("pressure decomposition sums to the whole") {
    const Grid1D grid(64, two_pi);
    const SimState zero = test::background_state(grid, Background::shear(0.0, 1.0));
    const PressureParts none = decompose_pressure(zero.pressure, zero.elsasser, *zero.strips);
    CHECK(none.harmonic.p.max_abs() < 1e-14);
    CHECK(none.forced.p_hat.max_abs() < 1e-14);

    const SimState st = busy_state(grid);
    const PressureParts parts = decompose_pressure(st.pressure, st.elsasser, *st.strips);
    CHECK(max_diff(parts.harmonic.p + parts.forced.p, st.pressure.p) < 1e-9);
    CHECK(max_diff(parts.harmonic.p_hat + parts.forced.p_hat, st.pressure.p_hat) < 1e-9);
}

TEST_CASE("source-free layers have a purely harmonic pressure") {
    // Uniform Elsasser fields make both sources vanish while the jump stays nonzero.
    const Grid1D grid(64, two_pi);
    SurfaceState s(grid);
    s.f.samples = sample(grid, [](double x) { return 0.2 * std::sin(x); });
    s.v.samples = sample(grid, [](double x) { return 0.1 * std::cos(2.0 * x); });
    const StripPair strips = build_strips(s, 33, MapKind::vertical_stretch);
    ElsasserState e(grid.n(), 33);
    e.lam_plus.c1 = Field2D(grid.n(), 33, 0.3);
    const PressurePair pp = solve_pressure(e, s, strips);
    CHECK(pp.p.max_abs() > 1e-3);
    const PressureParts parts = decompose_pressure(pp, e, strips);
    CHECK(parts.forced.p.max_abs() < 1e-9);
    CHECK(parts.forced.p_hat.max_abs() < 1e-9);
    CHECK(max_diff(parts.harmonic.p, pp.p) < 1e-9);
}

TEST_CASE("Dirichlet-Neumann operator: constants, flat symbol, symmetry") {
    const Grid1D grid(64, two_pi);
    const SurfaceState flat(grid);
    for (Side side : {Side::lower, Side::upper})
        CHECK(max_abs(dirichlet_neumann(flat, std::vector<double>(64, 1.7), side)) < 1e-9);

    const double k = 3.0;
    const auto phi = sample(grid, [&](double x) { return std::cos(k * x); });
    const auto dn = dirichlet_neumann(flat, phi, Side::lower);
    CHECK(max_diff(dn, sample(grid, [&](double x) { return k * std::tanh(k) * std::cos(k * x); })) < 1e-8);

    const auto a = oracle::random_modes(grid, 8, 0, 12, 1.0);
    const auto b = oracle::random_modes(grid, 8, 1, 12, 1.0);
    for (Side side : {Side::lower, Side::upper}) {
        const double ab = inner(grid, dirichlet_neumann(flat, a, side), b);
        const double ba = inner(grid, a, dirichlet_neumann(flat, b, side));
        CHECK(std::abs(ab - ba) < 1e-9);
    }
}

TEST_CASE("Dirichlet-Neumann symbol error decays with vertical resolution") {
    const Grid1D grid(64, two_pi);
    const SurfaceState flat(grid);
    const double k = 12.0;
    const auto phi = sample(grid, [&](double x) { return std::cos(k * x); });
    const auto exact = sample(grid, [&](double x) { return k * std::tanh(k) * std::cos(k * x); });
    double prev = std::numeric_limits<double>::infinity();
    for (int n2 : {9, 17, 33}) {
        const double e = max_diff(dirichlet_neumann(flat, phi, Side::upper, n2), exact);
        CHECK((e < 1e-2 * prev || e < 1e-8));
        prev = e;
    }
    CHECK(prev < 1e-8);
}

TEST_CASE("mixed problems: zero data, manufactured Poisson, incompatible Neumann data") {
    const Grid1D grid(32, two_pi);
    const SurfaceState flat(grid);
    const MappedStrip map = build_map(flat, Side::lower, 17, MapKind::vertical_stretch);
    const MetricTerms metric = metric_terms(map);
    MixedBvp p;
    p.source = Field2D(32, 17);
    p.interface_data.assign(32, 0.0);
    p.wall_data.assign(32, 0.0);
    CHECK(solve_mixed_bvp(map, metric, p).u.max_abs() == 0.0);

    // u = cos(2x) exp(x2), so Laplacian u = -3u and d_x2 u = u on the wall.
    Field2D exact(32, 17);
    for (int j2 = 0; j2 < 17; ++j2)
        for (int j1 = 0; j1 < 32; ++j1) {
            const double x = grid.point(j1), y = map.x2(j2, j1);
            exact(j2, j1) = std::cos(2.0 * x) * std::exp(y);
            p.source(j2, j1) = -3.0 * exact(j2, j1);
        }
    p.at_wall = BcKind::neumann;
    p.interface_data.assign(exact.row(map.interface_row()).begin(), exact.row(map.interface_row()).end());
    p.wall_data.assign(exact.row(map.wall_row()).begin(), exact.row(map.wall_row()).end());
    CHECK(max_diff(solve_mixed_bvp(map, metric, p).u, exact) < 1e-10);
    CHECK(max_diff(mapped_laplacian(metric, exact), p.source) < 1e-8);

    MixedBvp bad;
    bad.source = Field2D(32, 17, 1.0);
    bad.at_interface = bad.at_wall = BcKind::neumann;
    bad.zero_mean_gauge = true;
    bad.interface_data.assign(32, 0.0);
    bad.wall_data.assign(32, 0.0);
    CHECK_THROWS_AS(solve_mixed_bvp(map, metric, bad), Incompatible);
    bad.zero_mean_gauge = false;
    CHECK_THROWS_AS(solve_mixed_bvp(map, metric, bad), std::invalid_argument);
}

}  // TEST_SUITE
