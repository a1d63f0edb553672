#include "support.hpp"

#include "oracles.hpp"

#include "cvsheet/diagnostics.hpp"
#include "cvsheet/spectral.hpp"
#include "cvsheet/surface.hpp"

#include <doctest.h>

using namespace cvs;
using cvs::test::max_diff;
using cvs::test::sample;
using cvs::test::two_pi;

namespace {

SurfaceState smooth_surface(const Grid1D& grid, double scale) {
    SurfaceState s(grid);
    s.f.samples = sample(grid, [&](double x) { return scale * (std::sin(x) + 0.3 * std::cos(2.0 * x)); });
    s.v.samples = sample(grid, [&](double x) { return scale * (0.5 * std::cos(x) - 0.2 * std::sin(3.0 * x)); });
    return s;
}

TraceBundle smooth_traces(const Grid1D& grid, double scale) {
    TraceBundle t;
    t.lam_plus1 = sample(grid, [&](double x) { return scale * std::cos(x); });
    t.lam_minus1 = sample(grid, [&](double x) { return scale * 0.4 * std::sin(2.0 * x); });
    t.hat_plus1 = sample(grid, [&](double x) { return scale * (0.2 + 0.1 * std::cos(3.0 * x)); });
    t.hat_minus1 = sample(grid, [&](double x) { return -scale * 0.3 * std::sin(x); });
    t.grad_p_n = sample(grid, [&](double x) { return scale * 0.1 * std::cos(2.0 * x); });
    t.grad_phat_n = sample(grid, [&](double x) { return -scale * 0.05 * std::sin(x); });
    return t;
}

std::vector<double> rhs_at(const Grid1D& grid, double eps) {
    return surface_rhs(smooth_surface(grid, eps), smooth_traces(grid, eps));
}

}  // namespace

TEST_SUITE("surface") {

TEST_CASE("without traces or pressure the interface obeys the wave equation") {
    const Grid1D grid(64, two_pi);
    const auto s = smooth_surface(grid, 0.2);
    const auto rhs = surface_rhs(s, TraceBundle::zeros(grid.n()));
    CHECK(max_diff(rhs, derivative(grid, s.f.samples, 2)) < 1e-13);
}

TEST_CASE("uniform traces give the constant-coefficient operator") {
    // With every first-component trace equal to c the equation reduces to
    // d_t v = (1 - c^2) f'' - 2 c v'.
    const Grid1D grid(64, two_pi);
    const auto s = smooth_surface(grid, 0.2);
    for (double c : {0.0, 0.35, -0.8}) {
        TraceBundle t = TraceBundle::zeros(grid.n());
        for (auto* tr : {&t.lam_plus1, &t.lam_minus1, &t.hat_plus1, &t.hat_minus1}) tr->assign(grid.n(), c);
        const auto fpp = derivative(grid, s.f.samples, 2);
        const auto dv = derivative(grid, s.v.samples);
        std::vector<double> expected(grid.n());
        for (int j = 0; j < grid.n(); ++j) expected[j] = (1.0 - c * c) * fpp[j] - 2.0 * c * dv[j];
        CHECK(max_diff(surface_rhs(s, t), expected) < 1e-12);
    }
}

TEST_CASE("pressure gradients enter with weight one half each") {
    const Grid1D grid(32, two_pi);
    const SurfaceState flat(grid);
    TraceBundle t = TraceBundle::zeros(grid.n());
    t.grad_p_n.assign(grid.n(), 0.6);
    t.grad_phat_n.assign(grid.n(), -0.2);
    for (double v : surface_rhs(flat, t)) CHECK(v == doctest::Approx(-0.2).epsilon(1e-14));
}

TEST_CASE("both groupings of the interface equation agree") {
    const Grid1D grid(128, 32.0);
    SurfaceState s(grid);
    s.f.samples = oracle::random_packet(grid, 5, 0, 8, 4.0);
    s.v.samples = oracle::random_packet(grid, 5, 1, 8, 4.0);
    TraceBundle t;
    t.lam_plus1 = oracle::random_packet(grid, 5, 2, 8, 4.0);
    t.lam_minus1 = oracle::random_packet(grid, 5, 3, 8, 4.0);
    t.hat_plus1 = oracle::random_packet(grid, 5, 4, 8, 4.0);
    t.hat_minus1 = oracle::random_packet(grid, 5, 5, 8, 4.0);
    t.grad_p_n = oracle::random_packet(grid, 5, 6, 8, 4.0);
    t.grad_phat_n = oracle::random_packet(grid, 5, 7, 8, 4.0);
    const auto a = surface_rhs(s, t);
    const auto b = surface_rhs_regrouped(s, t);
    CHECK(max_diff(a, b) < 1e-12 * (1.0 + max_abs(a)));
}

TEST_CASE("exchanging the layers leaves the interface equation unchanged") {
    const Grid1D grid(64, two_pi);
    const auto s = smooth_surface(grid, 0.3);
    const TraceBundle t = smooth_traces(grid, 1.0);
    TraceBundle swapped = t;
    std::swap(swapped.lam_plus1, swapped.hat_plus1);
    std::swap(swapped.lam_minus1, swapped.hat_minus1);
    std::swap(swapped.grad_p_n, swapped.grad_phat_n);
    CHECK(max_diff(surface_rhs(s, t), surface_rhs(s, swapped)) < 1e-14);
}

TEST_CASE("nonlinear remainder is quadratic in the amplitude") {
    // R(e) = e L + e^2 Q + O(e^3), so R(e) - 2 R(e/2) = e^2 Q / 2 + O(e^3) shrinks fourfold per halving.
    const Grid1D grid(64, two_pi);
    auto remainder = [&](double eps) {
        const auto full = rhs_at(grid, eps);
        const auto half = rhs_at(grid, 0.5 * eps);
        std::vector<double> r(grid.n());
        for (int j = 0; j < grid.n(); ++j) r[j] = full[j] - 2.0 * half[j];
        return max_abs(r);
    };
    const double r1 = remainder(1e-2), r2 = remainder(5e-3);
    CHECK(r1 > 0.0);
    CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.02));
}

TEST_CASE("rejects a trace bundle sampled on another grid") {
    const Grid1D grid(32, two_pi);
    CHECK_THROWS_AS(surface_rhs(SurfaceState(grid), TraceBundle::zeros(16)), std::invalid_argument);
}

TEST_CASE("kinematic residual of the steady state and of an injected error") {
    const Grid1D grid(32, two_pi);
    SimState st = test::background_state(grid, Background::shear(0.5, 1.0));
    CHECK(kinematic_residual(st.surface, st.elsasser, *st.strips).max() < 1e-13);
    const double eps = 1e-4;
    for (double& v : st.elsasser.lam_plus.c2.row(st.strips->lower.interface_row())) v += eps;
    const auto r = kinematic_residual(st.surface, st.elsasser, *st.strips);
    CHECK(max_abs(r.plus) == doctest::Approx(eps).epsilon(1e-9));
    CHECK(max_abs(r.cross_plus) == doctest::Approx(eps).epsilon(1e-9));
    CHECK(max_abs(r.minus) < 1e-13);
    CHECK(max_abs(r.cross_minus) < 1e-13);
}

TEST_CASE("reconstructed states satisfy the kinematic conditions") {
    const Grid1D grid(64, two_pi);
    const auto s = smooth_surface(grid, 0.15);
    VorticityState vort(grid.n(), 33);
    for (int j2 = 0; j2 < 33; ++j2)
        for (int j1 = 0; j1 < grid.n(); ++j1) vort.minus(j2, j1) = 0.2 * std::cos(grid.point(j1));
    const SimState st = make_state(s, vort, Background::shear(0.3, 1.0), ModelConfig{});
    CHECK(kinematic_residual(st.surface, st.elsasser, *st.strips).max() < 1e-8);
}

TEST_CASE("trace transport of vanishing data and of a uniform carrier") {
    const Grid1D grid(64, two_pi);
    const std::vector<double> zero(grid.n(), 0.0);
    for (Family fam : {Family::plus, Family::minus}) {
        auto [a, b] = trace_transport_rhs(grid, fam, zero, zero, zero, zero, zero);
        CHECK(max_abs(a) == 0.0);
        CHECK(max_abs(b) == 0.0);
    }
    // Lambda(-) rides on +e1 plus the carrier: d_t g = -(1 + c) g'.
    const double c = 0.25;
    const auto g = sample(grid, [](double x) { return std::sin(2.0 * x); });
    const std::vector<double> carrier(grid.n(), c);
    auto [a, b] = trace_transport_rhs(grid, Family::minus, g, zero, carrier, zero, zero);
    CHECK(max_diff(a, sample(grid, [&](double x) { return -(1.0 + c) * 2.0 * std::cos(2.0 * x); })) < 1e-12);
    auto [p, q] = trace_transport_rhs(grid, Family::plus, zero, g, carrier, zero, zero);
    CHECK(max_diff(q, sample(grid, [&](double x) { return -(c - 1.0) * 2.0 * std::cos(2.0 * x); })) < 1e-12);
}

TEST_CASE("amplitude bound without perturbation is an equality") {
    std::vector<AmplitudeSample> history;
    for (int i = 0; i <= 10; ++i) history.push_back({0.1 * i, 0.3, 0.0, 0.0, 0.0});
    const auto r = amplitude_bound(history, mass_constant(0.55), 0.1);
    CHECK(r.holds);
    CHECK_FALSE(r.sparse);
    for (std::size_t i = 0; i < r.lhs.size(); ++i) CHECK(r.lhs[i] == r.rhs[i]);
}

TEST_CASE("amplitude bound uses the running supremum of the better family") {
    const double mass = 2.0;
    const std::vector<AmplitudeSample> history{
        {0.0, 1.0, 0.0, 0.5, 0.2},
        {0.5, 1.1, 1.0, 0.1, 0.4},
        {2.0, 1.2, 0.0, 0.0, 0.0},
    };
    const auto r = amplitude_bound(history, mass, 1.0);
    CHECK(r.sparse);
    CHECK(r.rhs[0] == doctest::Approx(1.0 + 0.2));
    CHECK(r.rhs[1] == doctest::Approx(1.0 + std::min(0.5, 0.8)));
    CHECK(r.rhs[2] == r.rhs[1]);
    CHECK(r.holds);
    const std::vector<AmplitudeSample> broken{{0.0, 1.0, 0.0, 0.0, 0.0}, {0.1, 1.5, 0.0, 0.0, 0.0}};
    CHECK_FALSE(amplitude_bound(broken, mass, 1.0).holds);
}

}  // TEST_SUITE
