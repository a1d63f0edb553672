#include "support.hpp"

#include "cvsheet/vorticity.hpp"

#include <doctest.h>

using namespace cvs;
using cvs::test::max_diff;
using cvs::test::two_pi;

namespace {

struct FlatLayer {
    Grid1D grid;
    MappedStrip map;
    MetricTerms metric;

    explicit FlatLayer(int n1, int n2 = 17)
        : grid(n1, two_pi), map(build_map(SurfaceState(grid), Side::lower, n2, MapKind::vertical_stretch)),
          metric(metric_terms(map)) {}

    Field2D fill(auto&& fn) const {
        Field2D out(grid.n(), map.n2());
        for (int j2 = 0; j2 < map.n2(); ++j2)
            for (int j1 = 0; j1 < grid.n(); ++j1) out(j2, j1) = fn(grid.point(j1), map.x2(j2, j1));
        return out;
    }
};

}  // namespace

TEST_SUITE("vorticity") {

TEST_CASE("with vanishing fields the curls are carried by the background") {
    // Z(-) = -e1 so that d_t w(+) = d1 w(+); Z(+) = e1 gives d_t w(-) = -d1 w(-).
    const FlatLayer layer(64);
    const Field2D w = layer.fill([](double x, double y) { return std::sin(2.0 * x) * std::cos(y); });
    const Field2D dw = layer.fill([](double x, double y) { return 2.0 * std::cos(2.0 * x) * std::cos(y); });
    const Field2D zero(layer.grid.n(), layer.map.n2());
    const Field2D ones(layer.grid.n(), layer.map.n2(), 1.0);
    Field2D minus_ones = ones;
    minus_ones *= -1.0;
    CHECK(max_diff(advect(w, minus_ones, zero, layer.metric), dw) < 1e-12);
    Field2D back = advect(w, ones, zero, layer.metric);
    back *= -1.0;
    CHECK(max_diff(back, dw) < 1e-12);
}

TEST_CASE("a constant added to the carrier shifts the transport speed") {
    const FlatLayer layer(64);
    const Field2D w = layer.fill([](double x, double y) { return std::cos(x) * (1.0 + y * y); });
    const Field2D zero(layer.grid.n(), layer.map.n2());
    for (double c : {0.3, -0.7}) {
        const Field2D carrier(layer.grid.n(), layer.map.n2(), c - 1.0);
        const Field2D expected = layer.fill([&](double x, double y) { return (1.0 - c) * -std::sin(x) * (1.0 + y * y); });
        CHECK(max_diff(advect(w, carrier, zero, layer.metric), expected) < 1e-12);
    }
}

TEST_CASE("vertical carrier transports along x2") {
    const FlatLayer layer(32, 17);
    const Field2D w = layer.fill([](double x, double y) { return std::cos(x) * y * y * y; });
    const Field2D zero(layer.grid.n(), layer.map.n2());
    const Field2D up(layer.grid.n(), layer.map.n2(), 0.5);
    const Field2D expected = layer.fill([](double x, double y) { return -0.5 * 3.0 * std::cos(x) * y * y; });
    CHECK(max_diff(advect(w, zero, up, layer.metric), expected) < 1e-11);
}

TEST_CASE("uniform fields produce no curl source") {
    const FlatLayer layer(32);
    const Vec2Field a{Field2D(32, 17, 0.4), Field2D(32, 17, -0.1)};
    const Vec2Field b{Field2D(32, 17, 1.3), Field2D(32, 17, 0.7)};
    CHECK(curl_source(a, b, layer.metric).max_abs() < 1e-14);
}

TEST_CASE("curl source of a manufactured pair") {
    // self = (sin x1, 0), other = (x2, 0): only d1 self x grad other^1 = cos x1 * 1 survives.
    const FlatLayer layer(64);
    const Vec2Field self{layer.fill([](double x, double) { return std::sin(x); }), Field2D(64, 17)};
    const Vec2Field other{layer.fill([](double, double y) { return y; }), Field2D(64, 17)};
    const Field2D expected = layer.fill([](double x, double) { return std::cos(x); });
    CHECK(max_diff(curl_source(self, other, layer.metric), expected) < 1e-12);
    // A vanishing family has no source, whatever it is paired with.
    CHECK(curl_source(Vec2Field(64, 17), other, layer.metric).max_abs() == 0.0);
}

TEST_CASE("background states are stationary for the curls") {
    const Grid1D grid(32, two_pi);
    const SimState st = test::background_state(grid, Background::shear(0.6, 1.0));
    const VorticityState d = curl_transport_rhs(st.vort, st.elsasser, *st.strips);
    for (const Field2D* f : {&d.plus, &d.minus, &d.hat_plus, &d.hat_minus}) CHECK(f->max_abs() < 1e-13);
}

TEST_CASE("mesh motion adds the vertical transport term") {
    const Grid1D grid(32, two_pi);
    const SimState st = test::background_state(grid, Background{});
    VorticityState vort = st.vort;
    const MappedStrip& lower = st.strips->lower;
    for (int j2 = 0; j2 < lower.n2(); ++j2)
        for (int j1 = 0; j1 < grid.n(); ++j1) vort.plus(j2, j1) = lower.x2(j2, j1) * lower.x2(j2, j1);
    MeshMotion mesh{Field2D(grid.n(), lower.n2(), 0.25), Field2D(grid.n(), st.strips->upper.n2())};
    const VorticityState still = curl_transport_rhs(vort, st.elsasser, *st.strips);
    const VorticityState moving = curl_transport_rhs(vort, st.elsasser, *st.strips, mesh);
    double worst = 0.0;
    for (int j2 = 0; j2 < lower.n2(); ++j2)
        for (int j1 = 0; j1 < grid.n(); ++j1)
            worst = std::max(worst, std::abs(moving.plus(j2, j1) - still.plus(j2, j1) - 0.25 * 2.0 * lower.x2(j2, j1)));
    CHECK(worst < 1e-12);
    CHECK(max_diff(moving.hat_minus, still.hat_minus) == 0.0);
}

}  // TEST_SUITE
