#include "cvsheet/diagnostics.hpp"

#include "cvsheet/surface.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace cvs {

namespace {

constexpr Side sides[] = {Side::lower, Side::upper};
constexpr Family families[] = {Family::plus, Family::minus};

void check_order(int max_order) {
    if (max_order < 0 || max_order > energy_order_cap)
        throw std::invalid_argument("derivative order " + std::to_string(max_order) + " outside the supported range [0, " +
                                    std::to_string(energy_order_cap) + "]");
}

// Squared weights on x1 for the energy (<w+->^{2 power}) and for its ghost (the same over <w-+>^{2 mu}).
struct WeightProfiles {
    std::vector<double> plain;
    std::vector<double> ghost;
};

WeightProfiles profiles(const Grid1D& grid, const WeightSpec& spec, Family fam, double power) {
    WeightProfiles w{weight_samples(grid, spec, fam, 2.0 * power), weight_samples(grid, spec, opposite(fam), -2.0 * spec.mu)};
    for (std::size_t j = 0; j < w.ghost.size(); ++j) w.ghost[j] *= w.plain[j];
    return w;
}

void accumulate(EnergyPair& acc, const Field2D& g, const MetricTerms& metric, const WeightProfiles& w) {
    Field2D a(g.n1, g.n2), b(g.n1, g.n2);
    for (int j2 = 0; j2 < g.n2; ++j2)
        for (int j1 = 0; j1 < g.n1; ++j1) {
            const double sq = g(j2, j1) * g(j2, j1);
            a(j2, j1) = w.plain[j1] * sq;
            b(j2, j1) = w.ghost[j1] * sq;
        }
    acc.energy += metric.integrate(a);
    acc.ghost += metric.integrate(b);
}

// Every distinct mixed derivative d1^i d2^j g with i + j <= max_order, one metric derivative per entry.
void accumulate_derivatives(EnergyPair& acc, const Field2D& g, const MetricTerms& metric, const WeightProfiles& w,
                            int max_order) {
    std::vector<Field2D> level{g};
    accumulate(acc, g, metric, w);
    for (int k = 1; k <= max_order; ++k) {
        std::vector<Field2D> next;
        next.reserve(k + 1);
        auto [first, second] = metric.gradient(level[0]);
        next.push_back(std::move(first));
        next.push_back(std::move(second));
        for (int j = 2; j <= k; ++j) next.push_back(metric.dx2(level[j - 1]));
        for (const Field2D& d : next) accumulate(acc, d, metric, w);
        level = std::move(next);
    }
}

Field2D deviation(const Field2D& c1, double speed) {
    Field2D out = c1;
    for (double& v : out.data) v -= speed;
    return out;
}

}  // namespace

EnergyPair bulk_energies(const SimState& state, const WeightSpec& spec, int max_order, double power) {
    check_order(max_order);
    EnergyPair acc;
    for (Side side : sides) {
        const MetricTerms& metric = state.strips->metric(side);
        for (Family fam : families) {
            const WeightProfiles w = profiles(state.grid(), spec, fam, power);
            const Vec2Field& lam = state.elsasser.get(side, fam);
            accumulate_derivatives(acc, deviation(lam.c1, state.background.speed(side, fam)), metric, w, max_order);
            accumulate_derivatives(acc, lam.c2, metric, w, max_order);
        }
    }
    return acc;
}

double bulk_energy(const SimState& state, const WeightSpec& spec, int max_order, double power) {
    return bulk_energies(state, spec, max_order, power).energy;
}

double ghost_bulk_energy(const SimState& state, const WeightSpec& spec, int max_order, double power) {
    return bulk_energies(state, spec, max_order, power).ghost;
}

EnergyPair surface_energies(const SurfaceState& surface, const WeightSpec& spec, int s) {
    if (s < 1) throw std::invalid_argument("surface energy needs s >= 1");
    check_order(s - 1);
    const Grid1D& grid = surface.grid();
    const auto fp = derivative(grid, surface.f.samples);
    EnergyPair acc;
    for (Family fam : families) {
        const double sign = sign_of(fam);
        std::vector<double> c(grid.n());
        for (std::size_t j = 0; j < c.size(); ++j) c[j] = surface.v.samples[j] + sign * fp[j];
        const auto plain = weight_samples(grid, spec, fam, 4.0 * spec.mu);
        const auto ghost = weight_samples(grid, spec, opposite(fam), -2.0 * spec.mu);
        for (int a = 0; a < s; ++a) {
            const SpectralField1D g = fractional_derivative(SpectralField1D(grid, derivative(grid, c, a)), 0.5);
            for (int j = 0; j < grid.n(); ++j) {
                const double sq = g.samples[j] * g.samples[j] * grid.spacing();
                acc.energy += plain[j] * sq;
                acc.ghost += plain[j] * ghost[j] * sq;
            }
        }
    }
    return acc;
}

double surface_energy(const SurfaceState& surface, const WeightSpec& spec, int s) {
    return surface_energies(surface, spec, s).energy;
}

double ghost_surface_energy(const SurfaceState& surface, const WeightSpec& spec, int s) {
    return surface_energies(surface, spec, s).ghost;
}

EnergyPair vorticity_energies(const SimState& state, const WeightSpec& spec, int max_order, double power) {
    check_order(max_order);
    EnergyPair acc;
    for (Side side : sides)
        for (Family fam : families)
            accumulate_derivatives(acc, state.vort.get(side, fam), state.strips->metric(side),
                                   profiles(state.grid(), spec, fam, power), max_order);
    return acc;
}

EnergyPair tangential_energies(const SimState& state, const WeightSpec& spec, int max_order, double power, double c0) {
    check_order(max_order);
    EnergyPair acc;
    for (Side side : sides) {
        const MetricTerms& metric = state.strips->metric(side);
        const Field2D lift = tangential_lift(state.surface, state.strips->map(side), c0);
        auto tangential = [&](const Field2D& g) {
            Field2D out = metric.dx1(g);
            out += hadamard(lift, metric.dx2(g));
            return out;
        };
        for (Family fam : families) {
            const WeightProfiles w = profiles(state.grid(), spec, fam, power);
            const Vec2Field& lam = state.elsasser.get(side, fam);
            for (Field2D g : {deviation(lam.c1, state.background.speed(side, fam)), lam.c2}) {
                accumulate(acc, g, metric, w);
                for (int m = 1; m <= max_order; ++m) {
                    g = tangential(g);
                    accumulate(acc, g, metric, w);
                }
            }
        }
    }
    return acc;
}

EnergyReport energy_report(const SimState& state, const DiagnosticsConfig& cfg) {
    if (cfg.s < 1) throw std::invalid_argument("energy index s must be >= 1");
    WeightSpec spec = cfg.weights;
    spec.t = state.time;
    const int high = std::min(cfg.s, energy_order_cap);
    const double mu = spec.mu;

    const EnergyPair low = bulk_energies(state, spec, energy_order_cap, 5.0 * mu);
    const EnergyPair hi = bulk_energies(state, spec, high, 2.0 * mu);
    const EnergyPair surf = surface_energies(state.surface, spec, high);
    const EnergyPair vort = vorticity_energies(state, spec, high - 1, 2.0 * mu);
    const EnergyPair tang = tangential_energies(state, spec, energy_order_cap, 5.0 * mu, cfg.c0);

    EnergyReport r;
    r.time = state.time;
    r.e_bulk_low = low.energy;
    r.e_bulk_high = hi.energy;
    r.e_surface = surf.energy;
    r.e_ghost = low.ghost + hi.ghost + surf.ghost;
    r.e_vorticity = vort.energy;
    r.e_tangential = tang.energy;
    const auto margin = stability_margin(collect_traces(state.elsasser, state.pressure, *state.strips));
    r.stability_min = std::numeric_limits<double>::infinity();
    for (double m : margin) r.stability_min = std::min(r.stability_min, m);
    r.amplitude = max_abs(state.surface.f.samples);
    r.order_cap = energy_order_cap;
    return r;
}

AmplitudeSample amplitude_sample(const SimState& state, const WeightSpec& spec) {
    WeightSpec at = spec;
    at.t = state.time;
    AmplitudeSample a;
    a.time = state.time;
    a.f_sup = max_abs(state.surface.f.samples);
    a.slope_sup = max_abs(derivative(state.grid(), state.surface.f.samples));
    for (Family fam : families) {
        const auto w = weight_samples(state.grid(), at, fam, 2.0 * spec.mu);
        double sup = 0.0;
        for (Side side : sides) {
            const Vec2Field& lam = state.elsasser.get(side, fam);
            const double speed = state.background.speed(side, fam);
            for (int j2 = 0; j2 < lam.c1.n2; ++j2)
                for (int j1 = 0; j1 < lam.c1.n1; ++j1)
                    sup = std::max(sup, w[j1] * std::hypot(lam.c1(j2, j1) - speed, lam.c2(j2, j1)));
        }
        (fam == Family::plus ? a.weighted_plus : a.weighted_minus) = sup;
    }
    return a;
}

BudgetResult energy_budget(std::span<const EnergyReport> series, double cap) {
    if (series.size() < 2) throw std::invalid_argument("energy budget needs at least two reports");
    const double e0 = series.front().total();
    if (!(e0 > 0.0)) throw std::domain_error("energy budget undefined for vanishing initial energy");
    BudgetResult out;
    double integral = 0.0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (i > 0)
            integral += 0.5 * (series[i].time - series[i - 1].time) * (series[i].e_ghost + series[i - 1].e_ghost);
        const double running = (series[i].total() + integral) / e0;
        if (!std::isfinite(running) || running > cap) {
            if (!out.flagged) out.flagged_time = series[i].time;
            out.flagged = true;
        }
        if (std::isfinite(running))
            out.ratio = std::max(out.ratio, running);
        else
            out.ratio = std::numeric_limits<double>::infinity();
    }
    out.ghost_integral = integral;
    return out;
}

std::string energy_csv_header() {
    return "time,e_bulk_low,e_bulk_high,e_surface,e_ghost,e_vorticity,e_tangential,stability_min,amplitude,order_cap";
}

std::string energy_csv_row(const EnergyReport& r) {
    std::string out;
    char buf[40];
    for (double v : {r.time, r.e_bulk_low, r.e_bulk_high, r.e_surface, r.e_ghost, r.e_vorticity, r.e_tangential,
                     r.stability_min, r.amplitude}) {
        std::snprintf(buf, sizeof buf, "%.17g,", v);
        out += buf;
    }
    out += std::to_string(r.order_cap);
    return out;
}

void write_energy_csv(std::ostream& os, std::span<const EnergyReport> series) {
    os << energy_csv_header() << '\n';
    for (const EnergyReport& r : series) os << energy_csv_row(r) << '\n';
}

}  // namespace cvs
