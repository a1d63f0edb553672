#include "support.hpp"

#include "cvsheet/linstab.hpp"

#include <doctest.h>

#include <sstream>

using namespace cvs;
using cvs::test::two_pi;

namespace {

PlanarParams planar(double jump, double b, double k = 1.0) {
    PlanarParams p;
    p.u_lower = -0.5 * jump;
    p.u_upper = 0.5 * jump;
    p.b_lower = b;
    p.b_upper = b;
    p.k = k;
    return p;
}

// Classical channel vortex sheet with equal densities: neutral when
// coth_l (w - k u_l)^2 + coth_u (w - k u_u)^2 = k^2 (coth_l b_l^2 + coth_u b_u^2) has a double root.
double channel_threshold(const PlanarParams& p) {
    const double a = 1.0 / std::tanh(std::abs(p.k) * p.depth_lower);
    const double c = 1.0 / std::tanh(std::abs(p.k) * p.depth_upper);
    return std::sqrt((a + c) * (a * p.b_lower * p.b_lower + c * p.b_upper * p.b_upper) / (a * c));
}

}  // namespace

TEST_SUITE("linstab") {

TEST_CASE("parameters map to the background layout and back") {
    PlanarParams p = planar(0.6, 1.3);
    p.u_lower += 0.1;
    const PlanarParams q = PlanarParams::from_background(p.background(), p.k);
    CHECK(q.u_lower == doctest::Approx(p.u_lower));
    CHECK(q.u_upper == doctest::Approx(p.u_upper));
    CHECK(q.b_lower == doctest::Approx(p.b_lower));
    CHECK(q.b_upper == doctest::Approx(p.b_upper));
    const Background bg = Background::shear(0.6, 1.3);
    const Background pb = planar(0.6, 1.3).background();
    CHECK(pb.lower_plus == doctest::Approx(bg.lower_plus));
    CHECK(pb.upper_minus == doctest::Approx(bg.upper_minus));
}

TEST_CASE("field without shear gives neutral Alfven waves") {
    for (double k : {0.5, 1.0, 3.0}) {
        const ModeResult r = dispersion_roots(planar(0.0, 1.0, k));
        CHECK(r.growth_rate < 1e-12);
        for (const Complex& w : r.frequencies) {
            CHECK(std::abs(w.imag()) < 1e-12);
            CHECK(std::abs(w.real()) == doctest::Approx(k));
        }
    }
}

TEST_CASE("shear without field grows at half the jump times k") {
    for (double jump : {0.3, 1.0}) {
        const ModeResult r = dispersion_roots(planar(jump, 0.0, 2.0));
        CHECK(r.growth_rate == doctest::Approx(0.5 * 2.0 * jump).epsilon(1e-12));
    }
}

TEST_CASE("a common velocity shifts the frequencies and keeps the growth") {
    const PlanarParams base = planar(2.5, 1.0, 1.5);
    PlanarParams moved = base;
    moved.u_lower += 0.7;
    moved.u_upper += 0.7;
    const ModeResult a = dispersion_roots(base);
    const ModeResult b = dispersion_roots(moved);
    CHECK(b.growth_rate == doctest::Approx(a.growth_rate).epsilon(1e-12));
    double sa = 0.0, sb = 0.0;
    for (int i = 0; i < 2; ++i) {
        sa += a.frequencies[i].real();
        sb += b.frequencies[i].real();
    }
    CHECK(sb - sa == doctest::Approx(2.0 * 1.5 * 0.7).epsilon(1e-12));
}

TEST_CASE("neutral jump is even and grows with the field") {
    const PlanarParams base = planar(0.0, 1.0);
    const double up = neutral_threshold(base, SweepField::jump, 0.0, 5.0);
    const double down = neutral_threshold(base, SweepField::jump, -5.0, 0.0);
    CHECK(up == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(down == doctest::Approx(-up).epsilon(1e-10));
    double prev = 0.0;
    for (double b : {0.5, 1.0, 1.5}) {
        const double t = neutral_threshold(planar(0.0, b), SweepField::jump, 0.0, 10.0);
        CHECK(t > prev);
        CHECK(t == doctest::Approx(2.0 * b).epsilon(1e-10));
        prev = t;
    }
    CHECK_THROWS_AS(neutral_threshold(base, SweepField::jump, 0.0, 1.0), std::domain_error);
}

TEST_CASE("neutral jump of channels with unequal depths and fields") {
    for (double dl : {0.5, 1.0, 2.0})
        for (double du : {0.3, 1.0})
            for (double k : {0.5, 2.0}) {
                PlanarParams p = planar(0.0, 1.0, k);
                p.b_upper = 0.6;
                p.depth_lower = dl;
                p.depth_upper = du;
                CHECK(neutral_threshold(p, SweepField::jump, 0.0, 10.0) ==
                      doctest::Approx(channel_threshold(p)).epsilon(1e-9));
            }
}

TEST_CASE("neutral field for a given jump") {
    const double jump = 1.0;
    const double b = neutral_threshold(planar(jump, 1.0), SweepField::field, 0.0, 2.0);
    CHECK(b == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("invalid planar parameters are rejected") {
    PlanarParams p;
    p.depth_lower = 0.0;
    CHECK_THROWS_AS(dispersion_roots(p), std::invalid_argument);
    p = PlanarParams{};
    p.k = 0.0;
    CHECK_THROWS_AS(dispersion_roots(p), std::invalid_argument);
}

TEST_CASE("sweep covers every value and wavenumber and writes CSV") {
    const std::vector<double> values{0.0, 1.0, 3.0};
    const std::vector<double> ks{0.5, 1.0};
    const auto rows = dispersion_sweep(planar(0.0, 1.0), SweepField::jump, values, ks);
    REQUIRE(rows.size() == 6);
    CHECK(rows[0].k == 0.5);
    CHECK(rows[2].value == 3.0);
    CHECK(rows[2].result.growth_rate > 0.0);
    CHECK(rows[1].result.growth_rate < 1e-12);
    std::ostringstream os;
    write_sweep_csv(os, SweepField::jump, rows);
    const std::string text = os.str();
    CHECK(text.rfind("k,jump,", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 7);
    CHECK(sweep_field_name(SweepField::field_upper) == "b_upper");
}

TEST_CASE("simulator right-hand side agrees with the linear operator") {
    ModelConfig model;
    model.n2 = 33;
    const Grid1D grid(64, two_pi);
    for (const Background& bg : {Background{}, Background::shear(0.8, 1.0)}) {
        const MatrixFreeReport a = matrix_free_check(bg, grid, 2, 1e-4, model);
        const MatrixFreeReport b = matrix_free_check(bg, grid, 2, 5e-5, model);
        CHECK(a.deviation <= 1e-2);
        // The mismatch comes from nonlinear terms, so it shrinks at least linearly with the amplitude.
        // Without shear the quadratic part cancels on this seed and the decay is quadratic.
        CHECK(a.deviation / b.deviation > 1.8);
    }
    CHECK_THROWS_AS(matrix_free_check(Background{}, grid, 0, 1e-4, model), std::invalid_argument);
}

}  // TEST_SUITE
