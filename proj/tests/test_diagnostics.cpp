#include "support.hpp"

#include "cvsheet/diagnostics.hpp"

#include <doctest.h>

#include <sstream>

using namespace cvs;
using cvs::test::sample;

namespace {

ModelConfig small_model() {
    ModelConfig m;
    m.n2 = 17;
    return m;
}

SimState disturbed(const Grid1D& grid, double eps) {
    const ModelConfig model = small_model();
    SurfaceState s(grid);
    s.f.samples = sample(grid, [&](double x) { return eps * std::exp(-x * x / 8.0) * std::cos(x); });
    s.v.samples = sample(grid, [&](double x) { return eps * 0.5 * std::exp(-x * x / 8.0) * std::sin(x); });
    VorticityState vort(grid.n(), model.n2);
    for (int j2 = 0; j2 < model.n2; ++j2)
        for (int j1 = 0; j1 < grid.n(); ++j1) vort.plus(j2, j1) = eps * std::exp(-grid.point(j1) * grid.point(j1) / 4.0);
    return make_state(s, vort, Background::shear(0.2, 1.0), model);
}

EnergyReport report_at(double t, double total, double ghost) {
    EnergyReport r;
    r.time = t;
    r.e_bulk_low = total;
    r.e_ghost = ghost;
    return r;
}

int count_fields(const std::string& line) { return static_cast<int>(std::count(line.begin(), line.end(), ',')) + 1; }

}  // namespace

TEST_SUITE("diagnostics") {

TEST_CASE("every energy of an undisturbed background vanishes") {
    const Grid1D grid(64, 32.0);
    const SimState st = test::background_state(grid, Background::shear(0.4, 1.0), small_model());
    const EnergyReport r = energy_report(st, DiagnosticsConfig{});
    // Roundoff in the reconstructed fields (~1e-14) is amplified by third vertical derivatives and by
    // weights of size <16>^{5 mu}, which leaves a floor near 1e-10.
    CHECK(r.total() < 1e-9);
    CHECK(r.e_ghost < 1e-9);
    CHECK(r.e_surface == 0.0);
    CHECK(r.e_vorticity < 1e-9);
    CHECK(r.e_tangential < 1e-9);
    CHECK(r.amplitude == 0.0);
    CHECK(r.stability_min == doctest::Approx(4.0 - 0.16));
}

TEST_CASE("energies grow with the derivative order and dominate their ghosts") {
    const Grid1D grid(64, 32.0);
    const SimState st = disturbed(grid, 0.05);
    const WeightSpec w{};
    double prev = 0.0;
    for (int order = 0; order <= energy_order_cap; ++order) {
        const EnergyPair e = bulk_energies(st, w, order, 2.0 * w.mu);
        CHECK(e.energy > prev);
        CHECK(e.ghost <= e.energy);
        CHECK(e.ghost > 0.0);
        prev = e.energy;
    }
    prev = 0.0;
    for (int s = 1; s <= 4; ++s) {
        const EnergyPair e = surface_energies(st.surface, w, s);
        CHECK(e.energy > prev);
        CHECK(e.ghost <= e.energy);
        prev = e.energy;
    }
    const EnergyPair v = vorticity_energies(st, w, 2, 2.0 * w.mu);
    CHECK(v.energy > 0.0);
    CHECK(v.ghost <= v.energy);
    CHECK(bulk_energy(st, w, 1, 5.0 * w.mu) >= bulk_energy(st, w, 1, 2.0 * w.mu));
}

TEST_CASE("surface energy is quadratic in the interface data") {
    const Grid1D grid(64, 32.0);
    SurfaceState s(grid);
    s.f.samples = sample(grid, [](double x) { return std::exp(-x * x / 8.0); });
    s.v.samples = sample(grid, [](double x) { return x * std::exp(-x * x / 8.0); });
    SurfaceState scaled = s;
    for (double& x : scaled.f.samples) x *= 3.0;
    for (double& x : scaled.v.samples) x *= 3.0;
    const WeightSpec w{};
    CHECK(surface_energy(scaled, w, 3) == doctest::Approx(9.0 * surface_energy(s, w, 3)).epsilon(1e-12));
    CHECK(ghost_surface_energy(scaled, w, 3) == doctest::Approx(9.0 * ghost_surface_energy(s, w, 3)).epsilon(1e-12));
}

TEST_CASE("energy orders outside the supported range are rejected") {
    const Grid1D grid(32, 32.0);
    const SimState st = test::background_state(grid, Background{}, small_model());
    CHECK_THROWS_AS(bulk_energy(st, WeightSpec{}, energy_order_cap + 1, 1.1), std::invalid_argument);
    CHECK_THROWS_AS(bulk_energy(st, WeightSpec{}, -1, 1.1), std::invalid_argument);
}

TEST_CASE("amplitude sample of a disturbed state") {
    const Grid1D grid(128, 32.0);
    const SimState st = disturbed(grid, 0.05);
    const AmplitudeSample a = amplitude_sample(st, WeightSpec{});
    CHECK(a.f_sup == doctest::Approx(max_abs(st.surface.f.samples)));
    CHECK(a.slope_sup == doctest::Approx(max_abs(derivative(grid, st.surface.f.samples))));
    CHECK(a.weighted_plus > 0.0);
    CHECK(a.weighted_minus > 0.0);
    const AmplitudeSample z = amplitude_sample(test::background_state(grid, Background{}, small_model()), WeightSpec{});
    CHECK(z.f_sup == 0.0);
    CHECK(z.weighted_plus < 1e-13);
}

TEST_CASE("budget integrates the ghost energy with the trapezoidal rule") {
    const std::vector<EnergyReport> flat{report_at(0.0, 2.0, 1.0), report_at(0.5, 2.0, 1.0), report_at(1.0, 2.0, 1.0)};
    const BudgetResult b = energy_budget(flat);
    CHECK(b.ghost_integral == doctest::Approx(1.0));
    CHECK(b.ratio == doctest::Approx(1.5));
    CHECK_FALSE(b.flagged);

    const std::vector<EnergyReport> ramp{report_at(0.0, 1.0, 0.0), report_at(2.0, 1.0, 4.0)};
    const BudgetResult r = energy_budget(ramp, 4.0);
    CHECK(r.ghost_integral == doctest::Approx(4.0));
    CHECK(r.ratio == doctest::Approx(5.0));
    CHECK(r.flagged);
    CHECK(r.flagged_time == 2.0);
}

TEST_CASE("budget ratio does not depend on the energy scale") {
    std::vector<EnergyReport> series{report_at(0.0, 1.0, 0.2), report_at(0.3, 1.4, 0.1), report_at(0.9, 0.8, 0.5)};
    const BudgetResult a = energy_budget(series);
    for (auto& r : series) {
        r.e_bulk_low *= 7.5;
        r.e_ghost *= 7.5;
    }
    const BudgetResult b = energy_budget(series);
    CHECK(b.ratio == doctest::Approx(a.ratio).epsilon(1e-14));
    CHECK(b.ghost_integral == doctest::Approx(7.5 * a.ghost_integral).epsilon(1e-14));
}

TEST_CASE("budget rejects short or degenerate series and flags non-finite values") {
    CHECK_THROWS_AS(energy_budget(std::vector<EnergyReport>{report_at(0.0, 1.0, 0.0)}), std::invalid_argument);
    CHECK_THROWS_AS(energy_budget(std::vector<EnergyReport>{report_at(0.0, 0.0, 0.0), report_at(1.0, 1.0, 0.0)}),
                    std::domain_error);
    const std::vector<EnergyReport> blown{report_at(0.0, 1.0, 0.0), report_at(0.5, std::nan(""), 0.0)};
    const BudgetResult b = energy_budget(blown);
    CHECK(b.flagged);
    CHECK(b.flagged_time == 0.5);
    CHECK(std::isinf(b.ratio));
}

TEST_CASE("energy CSV has one header and one row per report with matching columns") {
    const std::string header = energy_csv_header();
    CHECK(header.rfind("time,", 0) == 0);
    const std::vector<EnergyReport> series{report_at(0.0, 1.0, 0.0), report_at(0.25, 1.5, 0.125)};
    std::ostringstream os;
    write_energy_csv(os, series);
    std::istringstream is(os.str());
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(is, line)) lines.push_back(line);
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == header);
    CHECK(count_fields(lines[1]) == count_fields(header));
    CHECK(lines[2] == energy_csv_row(series[1]));
    CHECK(std::stod(lines[2].substr(0, lines[2].find(','))) == 0.25);
}

}  // TEST_SUITE
