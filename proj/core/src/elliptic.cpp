#include "cvsheet/elliptic.hpp"

#include "cvsheet/errors.hpp"
#include "cvsheet/flat_strip.hpp"

#include <cmath>
#include <stdexcept>

namespace cvs {

JumpData assemble_jump(const SurfaceState& surface, const TraceBundle& t) {
    const Grid1D& grid = surface.grid();
    const std::size_t n = grid.n();
    const auto fp = derivative(grid, surface.f.samples);
    const auto fpp = derivative(grid, surface.f.samples, 2);
    std::vector<double> minus_char(n), plus_char(n);  // v - f', v + f'
    for (std::size_t j = 0; j < n; ++j) {
        minus_char[j] = surface.v.samples[j] - fp[j];
        plus_char[j] = surface.v.samples[j] + fp[j];
    }
    const auto d_minus = derivative(grid, minus_char);
    const auto d_plus = derivative(grid, plus_char);
    std::vector<double> cross(n), diff_plus(n), diff_minus(n);
    for (std::size_t j = 0; j < n; ++j) {
        cross[j] = t.lam_plus1[j] * t.lam_minus1[j] - t.hat_plus1[j] * t.hat_minus1[j];
        diff_plus[j] = t.lam_plus1[j] - t.hat_plus1[j];
        diff_minus[j] = t.lam_minus1[j] - t.hat_minus1[j];
    }
    // Triple products: dealias the quadratic coefficient first, then each product with the surface term.
    dealias_in_place(grid, cross);
    const auto a = product(grid, cross, fpp);
    const auto b = product(grid, diff_plus, d_minus);
    const auto c = product(grid, diff_minus, d_plus);
    JumpData out{std::vector<double>(n)};
    for (std::size_t j = 0; j < n; ++j) out.g_jump[j] = -a[j] - b[j] - c[j];
    return out;
}

Vec2Field pressure_flux(const Vec2Field& lam_minus, const Vec2Field& lam_plus, const MetricTerms& metric) {
    const auto [d1p1, d2p1] = metric.gradient(lam_plus.c1);
    const auto [d1p2, d2p2] = metric.gradient(lam_plus.c2);
    Vec2Field flux(lam_plus.c1.n1, lam_plus.c1.n2);
    for (std::size_t i = 0; i < flux.c1.size(); ++i) {
        const double m1 = lam_minus.c1.data[i];
        const double m2 = lam_minus.c2.data[i];
        flux.c1.data[i] = m1 * d1p1.data[i] + m2 * d2p1.data[i];
        flux.c2.data[i] = m1 * d1p2.data[i] + m2 * d2p2.data[i];
    }
    dealias_rows(metric.grid, flux.c1.data);
    dealias_rows(metric.grid, flux.c2.data);
    return flux;
}

Field2D pressure_source(const Vec2Field& lam_minus, const Vec2Field& lam_plus, const MetricTerms& metric) {
    Field2D s = divergence(pressure_flux(lam_minus, lam_plus, metric), metric);
    s *= -1.0;
    return s;
}

namespace {

// Column integrals of Lambda(-)^1 Lambda(+)^1 over both layers.
std::vector<double> identity_forcing(const ElsasserState& state, const StripPair& strips) {
    auto lo = strips.lower_metric.column_integral(hadamard(state.lam_minus.c1, state.lam_plus.c1));
    const auto up = strips.upper_metric.column_integral(hadamard(state.hat_minus.c1, state.hat_plus.c1));
    for (std::size_t j = 0; j < lo.size(); ++j) lo[j] += up[j];
    return lo;
}

}  // namespace

PressurePair solve_pressure(const ElsasserState& state, const SurfaceState& surface, const StripPair& strips,
                            const PressureOptions& options, PressureReport* report) {
    const MappedStrip& lo = strips.lower;
    const MappedStrip& up = strips.upper;
    const MetricTerms& lm = strips.lower_metric;
    const MetricTerms& um = strips.upper_metric;
    const int n1 = lo.n1();
    const int n2 = lo.n2();
    const std::size_t block = static_cast<std::size_t>(n1) * n2;
    const std::size_t size = 2 * block + 1;
    const double length = lo.grid.length();

    const Field2D src_lo = pressure_source(state.lam_minus, state.lam_plus, lm);
    const Field2D src_up = pressure_source(state.hat_minus, state.hat_plus, um);
    TraceBundle traces = TraceBundle::zeros(n1);
    traces.lam_plus1 = restrict_trace(state.lam_plus.c1, lo);
    traces.lam_minus1 = restrict_trace(state.lam_minus.c1, lo);
    traces.hat_plus1 = restrict_trace(state.hat_plus.c1, up);
    traces.hat_minus1 = restrict_trace(state.hat_minus.c1, up);
    const JumpData jump = assemble_jump(surface, traces);
    const auto forcing = identity_forcing(state, strips);
    const auto fp = derivative(lo.grid, lo.f);

    const double k_nyq = lo.grid.wavenumber(n1 / 2);
    const double shift_lo = (1.0 + mean(lo.f)) * (1.0 + mean(lo.f)) * k_nyq * k_nyq;
    const double shift_up = (1.0 - mean(lo.f)) * (1.0 - mean(lo.f)) * k_nyq * k_nyq;

    auto unpack = [&](std::span<const double> x) {
        PressurePair pp{Field2D(n1, n2), Field2D(n1, n2)};
        std::copy(x.begin(), x.begin() + block, pp.p.data.begin());
        std::copy(x.begin() + block, x.begin() + 2 * block, pp.p_hat.data.begin());
        return pp;
    };

    // Residual rows in the layout of FlatPairSolver.
    auto apply = [&](const PressurePair& pp, double lambda, std::span<double> out) {
        const auto [px1, px2] = lm.gradient(pp.p);
        const auto [qx1, qx2] = um.gradient(pp.p_hat);
        const Field2D lap_p = lm.dx1(px1) + lm.dx2(px2);
        const Field2D lap_q = um.dx1(qx1) + um.dx2(qx2);
        const Field2D nyq_p = nyquist_component(pp.p);
        const Field2D nyq_q = nyquist_component(pp.p_hat);
        for (int j2 = 1; j2 < n2 - 1; ++j2)
            for (int j1 = 0; j1 < n1; ++j1) {
                const std::size_t i = static_cast<std::size_t>(j2) * n1 + j1;
                const double jl = lm.jacobian.data[i];
                const double ju = um.jacobian.data[i];
                out[i] = jl * jl * lap_p.data[i] - shift_lo * nyq_p.data[i] + lambda;
                out[block + i] = ju * ju * lap_q.data[i] - shift_up * nyq_q.data[i] + lambda;
            }
        const std::size_t top = static_cast<std::size_t>(n2 - 1) * n1;
        for (int j1 = 0; j1 < n1; ++j1) {
            out[j1] = px2(0, j1);
            out[top + j1] = pp.p(n2 - 1, j1) - pp.p_hat(0, j1);
            out[block + j1] = (-fp[j1] * px1(n2 - 1, j1) + px2(n2 - 1, j1)) - (-fp[j1] * qx1(0, j1) + qx2(0, j1));
            out[block + top + j1] = qx2(n2 - 1, j1);
        }
        out[2 * block] = (lm.integrate(pp.p) + um.integrate(pp.p_hat)) / length;
    };

    const LinearMap op = [&](std::span<const double> in, std::span<double> out) { apply(unpack(in), in[2 * block], out); };
    const auto flat = FlatPairSolver::shared(lo.grid, n2, 1.0 + mean(lo.f), 1.0 - mean(lo.f));
    const LinearMap precond = [&](std::span<const double> in, std::span<double> out) { flat->solve(in, out); };

    std::vector<double> rhs(size, 0.0);
    for (int j2 = 1; j2 < n2 - 1; ++j2)
        for (int j1 = 0; j1 < n1; ++j1) {
            const std::size_t i = static_cast<std::size_t>(j2) * n1 + j1;
            const double jl = lm.jacobian.data[i];
            const double ju = um.jacobian.data[i];
            rhs[i] = jl * jl * src_lo.data[i];
            rhs[block + i] = ju * ju * src_up.data[i];
        }
    for (int j1 = 0; j1 < n1; ++j1) rhs[block + j1] = jump.g_jump[j1];
    // A common constant solves every row except the normalization; split it off so the iteration
    // only sees the nonconstant part and its roundoff floor scales with that part.
    const Field2D ones(n1, n2, 1.0);
    const double level = -mean(forcing) / ((lm.integrate(ones) + um.integrate(ones)) / length);

    std::vector<double> x(size, 0.0);
    if (options.guess && options.guess->p.same_shape(src_lo)) {
        std::copy(options.guess->p.data.begin(), options.guess->p.data.end(), x.begin());
        std::copy(options.guess->p_hat.data.begin(), options.guess->p_hat.data.end(), x.begin() + block);
        for (std::size_t i = 0; i < 2 * block; ++i) x[i] -= level;
    }
    GmresOptions opt;
    opt.tolerance = options.tolerance;
    opt.max_iterations = options.max_iterations;
    opt.restart = 60;
    // Data at roundoff level relative to |Lambda|^2 is treated as zero.
    const double scale = state.max_abs();
    opt.absolute = 1e-14 * std::sqrt(static_cast<double>(size)) * scale * scale;
    const GmresResult stats = gmres(op, precond, rhs, x, opt);
    if (!stats.converged) throw SolverFailure("pressure solve did not converge", stats.relative_residual);
    for (std::size_t i = 0; i < 2 * block; ++i) x[i] += level;
    PressurePair pp = unpack(x);

    if (report) {
        *report = {};
        report->stats = stats;
        report->multiplier = x[2 * block];
        const Field2D rl = mapped_laplacian(lm, pp.p) - src_lo;
        const Field2D ru = mapped_laplacian(um, pp.p_hat) - src_up;
        for (int j2 = 1; j2 < n2 - 1; ++j2)
            for (int j1 = 0; j1 < n1; ++j1)
                report->interior = std::max({report->interior, std::abs(rl(j2, j1)), std::abs(ru(j2, j1))});
        const auto nl = interface_normal_derivative(lo, lm, pp.p);
        const auto nu = interface_normal_derivative(up, um, pp.p_hat);
        const Field2D px2 = lm.dx2(pp.p);
        const Field2D qx2 = um.dx2(pp.p_hat);
        for (int j1 = 0; j1 < n1; ++j1) {
            report->continuity = std::max(report->continuity, std::abs(pp.p(n2 - 1, j1) - pp.p_hat(0, j1)));
            report->jump = std::max(report->jump, std::abs(nl[j1] - nu[j1] - jump.g_jump[j1]));
            report->wall = std::max({report->wall, std::abs(px2(0, j1)), std::abs(qx2(n2 - 1, j1))});
        }
    }
    return pp;
}

std::vector<double> pressure_identity_residual(const PressurePair& pp, const ElsasserState& state,
                                               const StripPair& strips) {
    auto out = strips.lower_metric.column_integral(pp.p);
    const auto up = strips.upper_metric.column_integral(pp.p_hat);
    const auto forcing = identity_forcing(state, strips);
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += up[j] + forcing[j];
    return out;
}

PressureParts decompose_pressure(const PressurePair& pp, const ElsasserState& state, const StripPair& strips,
                                 double tolerance) {
    PressureParts parts;
    for (Side side : {Side::lower, Side::upper}) {
        const MappedStrip& map = strips.map(side);
        const MetricTerms& metric = strips.metric(side);
        const Field2D& whole = pp.get(side);
        const int n1 = map.n1();
        const int n2 = map.n2();

        MixedBvp harmonic;
        harmonic.source = Field2D(n1, n2);
        harmonic.at_interface = BcKind::dirichlet;
        harmonic.at_wall = BcKind::neumann;
        harmonic.interface_data = restrict_trace(whole, map);
        harmonic.wall_data.assign(n1, 0.0);
        harmonic.tolerance = tolerance;

        MixedBvp forced = harmonic;
        forced.source = side == Side::lower ? pressure_source(state.lam_minus, state.lam_plus, metric)
                                            : pressure_source(state.hat_minus, state.hat_plus, metric);
        forced.interface_data.assign(n1, 0.0);

        Field2D h = solve_mixed_bvp(map, metric, harmonic).u;
        Field2D f = solve_mixed_bvp(map, metric, forced).u;
        if (side == Side::lower) {
            parts.harmonic.p = std::move(h);
            parts.forced.p = std::move(f);
        } else {
            parts.harmonic.p_hat = std::move(h);
            parts.forced.p_hat = std::move(f);
        }
    }
    return parts;
}

std::vector<double> dirichlet_neumann(const MappedStrip& map, const MetricTerms& metric, std::span<const double> phi,
                                      double tolerance) {
    const int n1 = map.n1();
    MixedBvp problem;
    problem.source = Field2D(n1, map.n2());
    problem.at_interface = BcKind::dirichlet;
    problem.at_wall = BcKind::neumann;
    problem.interface_data.assign(phi.begin(), phi.end());
    problem.wall_data.assign(n1, 0.0);
    problem.tolerance = tolerance;
    const Field2D u = solve_mixed_bvp(map, metric, problem).u;
    auto out = interface_normal_derivative(map, metric, u);
    if (map.side == Side::upper)
        for (double& x : out) x = -x;
    return out;
}

std::vector<double> dirichlet_neumann(const SurfaceState& surface, std::span<const double> phi, Side side, int n2,
                                      MapKind kind) {
    const MappedStrip map = build_map(surface, side, n2, kind);
    return dirichlet_neumann(map, metric_terms(map), phi);
}

}  // namespace cvs
