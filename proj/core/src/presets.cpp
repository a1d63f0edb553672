#include "cvsheet/presets.hpp"

#include "cvsheet/rng.hpp"

#include <cmath>
#include <numbers>

namespace cvs {

const std::vector<PresetInfo>& preset_catalog() {
    static const std::vector<PresetInfo> list = {
        {"steady", "unperturbed background, b = 1, no shear; 1000 steps"},
        {"linear-wave", "single-mode interface displacement of amplitude 1e-3 on a 2 pi period"},
        {"alfven-packet", "one-sided packet: Gaussian interface with v = -f' and plus-family curl only"},
        {"kh-unstable", "shear 0.4 without field, mode-4 seed of 1e-4 (expected to abort)"},
        {"alfven-stable", "shear 0.4 with b = 1, enveloped carrier of 1e-4"},
        {"large-amplitude-flat", "interface 0.6 exp(-x^2/64) with small slopes, no shear"},
    };
    return list;
}

bool is_preset(const std::string& name) {
    for (const auto& p : preset_catalog())
        if (p.name == name) return true;
    return false;
}

RunConfig preset_config(const std::string& name) {
    if (!is_preset(name)) throw ConfigError("unknown preset '" + name + "'");
    RunConfig c;
    c.preset = name;
    if (name == "steady") {
        c.max_steps = 1000;
        c.horizon = 1000.0;
        c.cadence = 10;
    } else if (name == "linear-wave") {
        c.n1 = 32;
        c.length = 2.0 * std::numbers::pi;
        c.amplitude = 1e-3;
        c.mode = 1;
        c.horizon = 2.0;
    } else if (name == "alfven-packet") {
        c.n1 = 256;
        c.amplitude = 0.05;
        c.width = 2.0;
        c.horizon = 5.0;
    } else if (name == "kh-unstable") {
        c.n1 = 16;
        c.n2 = 17;
        c.length = 4.0 * std::numbers::pi;
        c.field = 0.0;
        c.jump = 0.4;
        c.amplitude = 1e-4;
        c.mode = 4;
        c.horizon = 40.0;
    } else if (name == "alfven-stable") {
        c.jump = 0.4;
        c.amplitude = 1e-4;
        c.mode = 20;
        c.width = 4.0;
        c.horizon = 20.0;
    } else if (name == "large-amplitude-flat") {
        c.n1 = 256;
        c.length = 128.0;
        c.amplitude = 0.6;
        c.width = 8.0;
        c.horizon = 10.0;
    }
    return c;
}

namespace {

double gaussian(double x, double width) { return std::exp(-x * x / (width * width)); }

}  // namespace

InitialData build_initial(const RunConfig& c) {
    c.validate();
    const Grid1D grid(c.n1, c.length);
    InitialData d{SurfaceState(grid), VorticityState(c.n1, c.n2), c.background()};
    auto& f = d.surface.f.samples;
    auto& v = d.surface.v.samples;
    const double a = c.amplitude;
    const double k = grid.wavenumber(c.mode);

    for (int j = 0; j < grid.n(); ++j) {
        const double x = grid.point(j);
        if (c.preset == "linear-wave" || c.preset == "kh-unstable") {
            f[j] = a * std::cos(k * x);
        } else if (c.preset == "alfven-packet") {
            // Left-moving profile f(x + t): v = f'.
            f[j] = a * gaussian(x, c.width);
            v[j] = -2.0 * x / (c.width * c.width) * f[j];
        } else if (c.preset == "alfven-stable") {
            f[j] = a * std::cos(k * x) * gaussian(x, c.width);
        } else if (c.preset == "large-amplitude-flat") {
            f[j] = a * gaussian(x, c.width);
        }
    }

    if (c.noise > 0.0) {
        CounterRng rng(c.seed);
        const int top = std::min(8, grid.dealias_limit());
        std::vector<double> extra(grid.n(), 0.0);
        for (int m = 1; m <= top; ++m) {
            const double km = grid.wavenumber(m);
            const double ac = rng.uniform(-1.0, 1.0) / (m * m);
            const double as = rng.uniform(-1.0, 1.0) / (m * m);
            for (int j = 0; j < grid.n(); ++j) {
                const double x = grid.point(j);
                extra[j] += ac * std::cos(km * x) + as * std::sin(km * x);
            }
        }
        for (int j = 0; j < grid.n(); ++j) extra[j] *= c.noise * gaussian(grid.point(j), c.width);
        const double m = mean(extra);
        for (int j = 0; j < grid.n(); ++j) v[j] += extra[j] - m;
    }

    d.surface.check_clearance(c.c0);

    if (c.preset == "alfven-packet") {
        for (Side side : {Side::lower, Side::upper}) {
            const MappedStrip map = build_map(d.surface, side, c.n2, c.map, c.c0);
            Field2D& w = d.vort.get(side, Family::plus);
            for (int j2 = 0; j2 < c.n2; ++j2)
                for (int j1 = 0; j1 < c.n1; ++j1)
                    w(j2, j1) = a * gaussian(grid.point(j1), c.width) * std::cos(0.5 * std::numbers::pi * map.x2(j2, j1));
        }
    }
    return d;
}

}  // namespace cvs
