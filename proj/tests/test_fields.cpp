#include "support.hpp"

#include "oracles.hpp"

#include "cvsheet/fields.hpp"
#include "cvsheet/surface.hpp"

#include <doctest.h>

#include <filesystem>

using namespace cvs;
using cvs::test::max_diff;
using cvs::test::sample;
using cvs::test::two_pi;

namespace {

Vec2Field constant_field(int n1, int n2, double a, double b) { return {Field2D(n1, n2, a), Field2D(n1, n2, b)}; }

SurfaceState wavy(const Grid1D& grid, double amp) {
    SurfaceState s(grid);
    s.f.samples = sample(grid, [&](double x) { return amp * std::sin(x); });
    return s;
}

}  // namespace

TEST_SUITE("fields") {

TEST_CASE("Elsasser variables of the background and of a uniform flow") {
    const int n1 = 8, n2 = 5;
    const Vec2Field h = constant_field(n1, n2, 1.0, 0.0);
    auto [p0, m0] = elsasser_from_primitive(constant_field(n1, n2, 0.0, 0.0), h);
    CHECK(p0.max_abs() == 0.0);
    CHECK(m0.max_abs() == 0.0);
    auto [p1, m1] = elsasser_from_primitive(constant_field(n1, n2, 0.1, 0.0), h);
    for (const Vec2Field* f : {&p1, &m1}) {
        for (double v : f->c1.data) CHECK(v == doctest::Approx(0.1).epsilon(1e-15));
        CHECK(f->c2.max_abs() == 0.0);
    }
}

TEST_CASE("primitive and Elsasser conversions invert each other") {
    const Grid1D grid(32, two_pi);
    const int n2 = 7;
    Vec2Field u(grid.n(), n2), h(grid.n(), n2);
    for (int j2 = 0; j2 < n2; ++j2) {
        const auto a = oracle::random_modes(grid, 4, 4 * j2, 6, 1.0);
        const auto b = oracle::random_modes(grid, 4, 4 * j2 + 1, 6, 1.0);
        const auto c = oracle::random_modes(grid, 4, 4 * j2 + 2, 6, 1.0);
        const auto d = oracle::random_modes(grid, 4, 4 * j2 + 3, 6, 1.0);
        std::copy(a.begin(), a.end(), u.c1.row(j2).begin());
        std::copy(b.begin(), b.end(), u.c2.row(j2).begin());
        std::copy(c.begin(), c.end(), h.c1.row(j2).begin());
        std::copy(d.begin(), d.end(), h.c2.row(j2).begin());
    }
    auto [lp, lm] = elsasser_from_primitive(u, h);
    auto [u2, h2] = primitive_from_elsasser(lp, lm);
    CHECK(max_diff(u2.c1, u.c1) < 1e-14);
    CHECK(max_diff(u2.c2, u.c2) < 1e-14);
    CHECK(max_diff(h2.c1, h.c1) < 1e-14);
    CHECK(max_diff(h2.c2, h.c2) < 1e-14);
    auto [lp2, lm2] = elsasser_from_primitive(u2, h2);
    CHECK(max_diff(lp2.c1, lp.c1) < 1e-14);
    CHECK(max_diff(lm2.c2, lm.c2) < 1e-14);
}

TEST_CASE("constant and stream-function fields are divergence free") {
    const Grid1D grid(64, two_pi);
    const SurfaceState flat(grid);
    const MappedStrip map = build_map(flat, Side::lower, 17, MapKind::vertical_stretch);
    const MetricTerms m = metric_terms(map);
    const Vec2Field c = constant_field(grid.n(), 17, 0.7, -0.2);
    CHECK(divergence(c, m).max_abs() < 1e-12);
    CHECK(curl(c, m).max_abs() < 1e-12);

    Field2D psi(grid.n(), 17);
    for (int j2 = 0; j2 < 17; ++j2)
        for (int j1 = 0; j1 < grid.n(); ++j1) psi(j2, j1) = std::sin(2.0 * grid.point(j1)) * std::cos(map.x2(j2, j1));
    auto [d1, d2] = m.gradient(psi);
    d2 *= -1.0;
    CHECK(divergence(Vec2Field(d2, d1), m).max_abs() < 1e-11);
}

TEST_CASE("divergence and curl of a manufactured field on a curved map") {
    const Grid1D grid(64, two_pi);
    const auto s = wavy(grid, 0.3);
    double errors[2];
    int level = 0;
    for (int n2 : {9, 17}) {
        const MappedStrip map = build_map(s, Side::upper, n2, MapKind::vertical_stretch);
        const MetricTerms m = metric_terms(map);
        Vec2Field F(grid.n(), n2);
        Field2D div_exact(grid.n(), n2), curl_exact(grid.n(), n2);
        for (int j2 = 0; j2 < n2; ++j2)
            for (int j1 = 0; j1 < grid.n(); ++j1) {
                const double x = grid.point(j1), y = map.x2(j2, j1), e = std::exp(2.0 * y);
                F.c1(j2, j1) = std::sin(x) * e;
                F.c2(j2, j1) = std::cos(x) * e;
                div_exact(j2, j1) = std::cos(x) * e + 2.0 * std::cos(x) * e;
                curl_exact(j2, j1) = -2.0 * std::sin(x) * e - std::sin(x) * e;
            }
        errors[level++] = std::max(max_diff(divergence(F, m), div_exact), max_diff(curl(F, m), curl_exact));
    }
    // The vertical collocation converges spectrally, so one doubling of n2 gains several digits.
    CHECK(errors[0] < 1e-3);
    CHECK(errors[1] < 1e-3 * errors[0] + 1e-10);
}

TEST_CASE("traces of constant fields and of the height on a flat strip") {
    const Grid1D grid(16, two_pi);
    const SurfaceState flat(grid);
    const MappedStrip map = build_map(flat, Side::lower, 9, MapKind::vertical_stretch);
    for (double v : restrict_trace(Field2D(16, 9, 3.0), map)) CHECK(v == 3.0);
    CHECK(max_abs(restrict_trace(map.x2, map)) == 0.0);
    const auto n = normal_trace(constant_field(16, 9, 2.0, 0.5), map);
    for (double v : n) CHECK(v == doctest::Approx(0.5));
}

TEST_CASE("div-curl reconstruction of zero data is zero") {
    const Grid1D grid(32, two_pi);
    const auto s = wavy(grid, 0.2);
    for (Side side : {Side::lower, Side::upper}) {
        const auto rec = div_curl_reconstruct(Field2D(32, 17), s, side, std::vector<double>(32, 0.0));
        CHECK(rec.field.max_abs() < 1e-12);
    }
}

TEST_CASE("div-curl reconstruction matches separation of variables on a flat layer") {
    // psi = sin(k x) sin(pi (x2 + 1)) vanishes on both boundaries of the lower layer.
    const Grid1D grid(64, two_pi);
    const double k = 3.0, pi = std::numbers::pi;
    const int n2 = 33;
    const SurfaceState flat(grid);
    const MappedStrip map = build_map(flat, Side::lower, n2, MapKind::vertical_stretch);
    Field2D omega(grid.n(), n2);
    Vec2Field exact(grid.n(), n2);
    for (int j2 = 0; j2 < n2; ++j2)
        for (int j1 = 0; j1 < grid.n(); ++j1) {
            const double x = grid.point(j1), y = map.x2(j2, j1);
            omega(j2, j1) = -(pi * pi + k * k) * std::sin(k * x) * std::sin(pi * (y + 1.0));
            exact.c1(j2, j1) = -pi * std::sin(k * x) * std::cos(pi * (y + 1.0));
            exact.c2(j2, j1) = k * std::cos(k * x) * std::sin(pi * (y + 1.0));
        }
    const auto rec = div_curl_reconstruct(omega, flat, Side::lower, std::vector<double>(grid.n(), 0.0));
    CHECK(max_diff(rec.field.c1, exact.c1) < 1e-6);
    CHECK(max_diff(rec.field.c2, exact.c2) < 1e-6);
}

TEST_CASE("reconstructed fields have the requested curl, no divergence and a unique answer") {
    const Grid1D grid(64, two_pi);
    const auto s = wavy(grid, 0.25);
    const int n2 = 33;
    for (Side side : {Side::lower, Side::upper}) {
        const MappedStrip map = build_map(s, side, n2, MapKind::vertical_stretch);
        const MetricTerms m = metric_terms(map);
        Field2D omega(grid.n(), n2);
        for (int j2 = 0; j2 < n2; ++j2)
            for (int j1 = 0; j1 < grid.n(); ++j1)
                omega(j2, j1) = std::cos(grid.point(j1)) * std::exp(-4.0 * std::pow(map.x2(j2, j1) - s.f[j1], 2));
        const auto trace = oracle::random_modes(grid, 21, side == Side::lower ? 0 : 1, 5, 0.2);
        const auto rec = div_curl_reconstruct(omega, map, m, trace, 0.3);
        const double scale = omega.max_abs();
        CHECK(divergence(rec.field, m).max_abs() < 1e-8 * scale);
        CHECK(max_diff(curl(rec.field, m), omega) < 1e-8 * scale);
        CHECK(max_diff(normal_trace(rec.field, map), trace) < 1e-9);
        for (double v : rec.field.c2.row(map.wall_row())) CHECK(std::abs(v) < 1e-10);

        Field2D guess = rec.stream;
        for (double& v : guess.data) v *= 1.01;
        const auto again = div_curl_reconstruct(omega, map, m, trace, 0.3, 1e-10, &guess);
        CHECK(max_diff(again.field.c1, rec.field.c1) < 1e-8);
        CHECK(max_diff(again.field.c2, rec.field.c2) < 1e-8);
    }
}

TEST_CASE("compatibility check of the exact background and of a wall violation") {
    const Grid1D grid(32, two_pi);
    SimState st = test::background_state(grid, Background::shear(0.4, 1.0));
    CHECK(compatibility_check(st.elsasser, st.surface, *st.strips).worst() < 1e-13);
    const double eps = 1e-3;
    const MappedStrip& lower = st.strips->lower;
    for (double& v : st.elsasser.lam_plus.c2.row(lower.wall_row())) v += eps;
    const auto report = compatibility_check(st.elsasser, st.surface, *st.strips);
    CHECK(report.wall == doctest::Approx(eps).epsilon(1e-10));
}

TEST_CASE("reconstructed admissible state passes the compatibility check") {
    const Grid1D grid(64, two_pi);
    SurfaceState s = wavy(grid, 0.2);
    s.v.samples = sample(grid, [](double x) { return 0.05 * std::cos(2.0 * x); });
    VorticityState vort(grid.n(), 33);
    for (int j2 = 0; j2 < 33; ++j2)
        for (int j1 = 0; j1 < grid.n(); ++j1) {
            vort.plus(j2, j1) = 0.1 * std::sin(grid.point(j1));
            vort.hat_minus(j2, j1) = 0.1 * std::cos(grid.point(j1));
        }
    const SimState st = make_state(s, vort, Background::shear(0.3, 1.0), ModelConfig{});
    CHECK(compatibility_check(st.elsasser, st.surface, *st.strips).worst() < 1e-8);
}

TEST_CASE("snapshots roundtrip through the binary format") {
    const auto dir = std::filesystem::temp_directory_path() / "cvsheet_snapshot_test";
    std::filesystem::create_directories(dir);
    Field2D f(8, 3);
    for (std::size_t i = 0; i < f.size(); ++i) f.data[i] = std::sin(0.37 * static_cast<double>(i)) * 1e3;
    write_snapshot(dir / "field", f, {"p", 8, 3, "harmonic", 1.25});
    SnapshotMeta meta;
    const Field2D back = read_snapshot(dir / "field", &meta);
    CHECK(back.data == f.data);
    CHECK(meta.field == "p");
    CHECK(meta.map_kind == "harmonic");
    CHECK(meta.time == 1.25);
    std::filesystem::remove_all(dir);
}

}  // TEST_SUITE
