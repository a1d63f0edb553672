#include "cvsheet/linstab.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace cvs {

void PlanarParams::validate() const {
    if (!(depth_lower > 0.0) || !(depth_upper > 0.0)) throw std::invalid_argument("layer depths must be positive");
    if (k == 0.0 || !std::isfinite(k)) throw std::invalid_argument("wavenumber must be finite and nonzero");
}

Background PlanarParams::background() const {
    return {u_lower + b_lower - 1.0, u_lower - b_lower + 1.0, u_upper + b_upper - 1.0, u_upper - b_upper + 1.0};
}

PlanarParams PlanarParams::from_background(const Background& bg, double k) {
    PlanarParams p;
    p.u_lower = 0.5 * (bg.lower_plus + bg.lower_minus);
    p.u_upper = 0.5 * (bg.upper_plus + bg.upper_minus);
    p.b_lower = 1.0 + 0.5 * (bg.lower_plus - bg.lower_minus);
    p.b_upper = 1.0 + 0.5 * (bg.upper_plus - bg.upper_minus);
    p.k = k;
    return p;
}

namespace {

struct Closure {
    ModeOperator op;
    ModeOperator jump;  ///< pressure normal-derivative jump as a function of (v, f)
    double dn_sum = 0.0;
};

Closure closure(const PlanarParams& params) {
    params.validate();
    const Background bg = params.background();
    const double ap = bg.lower_plus, am = bg.lower_minus, hp = bg.upper_plus, hm = bg.upper_minus;
    const double k = params.k;
    const double kk = k * k;
    const Complex ik(0.0, k);
    const double tl = std::abs(k) * std::tanh(std::abs(k) * params.depth_lower);
    const double tu = std::abs(k) * std::tanh(std::abs(k) * params.depth_upper);
    const double ratio = (tl - tu) / (tl + tu);

    // Jump of the pressure normal derivative.
    const ModeOperator g{-(ap - hp) * ik - (am - hm) * ik, (ap * am - hp * hm) * kk - (ap - hp) * kk + (am - hm) * kk};
    const double sum_plus = ap + hp, sum_minus = am + hm;
    const double quad = ap * am + hp * hm;
    ModeOperator op;
    op.velocity = -0.5 * sum_plus * ik - 0.5 * sum_minus * ik - 0.5 * ratio * g.velocity;
    op.displacement = -kk - 0.5 * sum_plus * kk + 0.5 * sum_minus * kk + 0.5 * quad * kk - 0.5 * ratio * g.displacement;
    return {op, g, tl + tu};
}

}  // namespace

ModeOperator mode_operator(const PlanarParams& params) { return closure(params).op; }

ModeResult dispersion_roots(const PlanarParams& params) {
    const Closure c = closure(params);
    Eigen::Matrix2cd companion;
    companion << c.op.velocity, c.op.displacement, 1.0, 0.0;
    const Eigen::ComplexEigenSolver<Eigen::Matrix2cd> solver(companion, false);
    if (solver.info() != Eigen::Success) throw std::runtime_error("dispersion eigen-solve failed");
    ModeResult r;
    r.growth_rate = 0.0;
    for (int i = 0; i < 2; ++i) {
        // d_t = lambda corresponds to exp(-i omega t) with omega = i lambda.
        const Complex lambda = solver.eigenvalues()(i);
        r.frequencies[i] = Complex(0.0, 1.0) * lambda;
        r.growth_rate = std::max(r.growth_rate, lambda.real());
        ModeShape& m = r.modes[i];
        m.interface = 1.0;
        m.velocity = lambda;
        m.pressure = (c.jump.velocity * lambda + c.jump.displacement) / c.dn_sum;
    }
    return r;
}

PlanarParams with_value(PlanarParams p, SweepField field, double value) {
    switch (field) {
        case SweepField::jump: {
            const double mid = 0.5 * (p.u_lower + p.u_upper);
            p.u_lower = mid - 0.5 * value;
            p.u_upper = mid + 0.5 * value;
            break;
        }
        case SweepField::field:
            p.b_lower = value;
            p.b_upper = value;
            break;
        case SweepField::field_lower:
            p.b_lower = value;
            break;
        case SweepField::field_upper:
            p.b_upper = value;
            break;
    }
    return p;
}

double neutral_threshold(const PlanarParams& base, SweepField field, double lo, double hi, double tolerance) {
    auto unstable = [&](double x) { return dispersion_roots(with_value(base, field, x)).growth_rate > 1e-10; };
    const bool at_lo = unstable(lo);
    if (at_lo == unstable(hi))
        throw std::domain_error("growth rate does not change sign on [" + std::to_string(lo) + ", " +
                                std::to_string(hi) + "]");
    while (std::abs(hi - lo) > tolerance * std::max(1.0, std::abs(lo) + std::abs(hi))) {
        const double mid = 0.5 * (lo + hi);
        (unstable(mid) == at_lo ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

std::vector<SweepRow> dispersion_sweep(const PlanarParams& base, SweepField field, std::span<const double> values,
                                       std::span<const double> wavenumbers) {
    std::vector<SweepRow> rows;
    rows.reserve(values.size() * wavenumbers.size());
    for (double k : wavenumbers)
        for (double x : values) {
            PlanarParams p = with_value(base, field, x);
            p.k = k;
            rows.push_back({k, x, dispersion_roots(p)});
        }
    return rows;
}

std::string sweep_field_name(SweepField field) {
    switch (field) {
        case SweepField::jump: return "jump";
        case SweepField::field: return "b";
        case SweepField::field_lower: return "b_lower";
        case SweepField::field_upper: return "b_upper";
    }
    return "unknown";
}

void write_sweep_csv(std::ostream& os, SweepField field, std::span<const SweepRow> rows) {
    os << "k," << sweep_field_name(field) << ",re_omega1,im_omega1,re_omega2,im_omega2,growth_rate\n";
    char buf[256];
    for (const SweepRow& r : rows) {
        const auto& w = r.result.frequencies;
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.k, r.value, w[0].real(),
                      w[0].imag(), w[1].real(), w[1].imag(), r.result.growth_rate);
        os << buf;
    }
}

MatrixFreeReport matrix_free_check(const Background& background, const Grid1D& grid, int mode, double eps,
                                   const ModelConfig& model) {
    if (mode <= 0 || mode > grid.dealias_limit()) throw std::invalid_argument("seed mode outside the resolved band");
    const double k = grid.wavenumber(mode);
    SurfaceState surface(grid);
    for (int j = 0; j < grid.n(); ++j) {
        const double x = grid.point(j);
        surface.f.samples[j] = eps * std::cos(k * x);
        surface.v.samples[j] = eps * std::sin(k * x);
    }
    const SimState state = make_state(surface, VorticityState(grid.n(), model.n2), background, model);
    const Derivative d = rhs_full(state, model);

    // The grid starts at -L/2, so the samples carry the phase exp(-i k L/2) relative to x = 0.
    const Complex phase = std::exp(Complex(0.0, -0.5 * k * grid.length()));
    const auto dv_hat = Fourier(grid.n()).forward(d.dv);
    MatrixFreeReport r;
    r.simulated = dv_hat[mode] / phase;
    const ModeOperator op = mode_operator(PlanarParams::from_background(background, k));
    const Complex f_hat = 0.5 * eps;
    const Complex v_hat = Complex(0.0, -0.5 * eps);
    r.linear = op.velocity * v_hat + op.displacement * f_hat;
    std::vector<double> diff(grid.n()), lin(grid.n());
    for (int j = 0; j < grid.n(); ++j) {
        lin[j] = 2.0 * (r.linear * std::exp(Complex(0.0, k * grid.point(j)))).real();
        diff[j] = d.dv[j] - lin[j];
    }
    r.deviation = l2_norm(grid, diff) / l2_norm(grid, lin);
    return r;
}

}  // namespace cvs
