#include "cvsheet/surface.hpp"

#include "cvsheet/mixed_bvp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cvs {

TraceBundle collect_traces(const ElsasserState& state, const PressurePair& pressure, const StripPair& strips) {
    TraceBundle t;
    t.lam_plus1 = restrict_trace(state.lam_plus.c1, strips.lower);
    t.lam_minus1 = restrict_trace(state.lam_minus.c1, strips.lower);
    t.hat_plus1 = restrict_trace(state.hat_plus.c1, strips.upper);
    t.hat_minus1 = restrict_trace(state.hat_minus.c1, strips.upper);
    t.grad_p_n = interface_normal_derivative(strips.lower, strips.lower_metric, pressure.p);
    t.grad_phat_n = interface_normal_derivative(strips.upper, strips.upper_metric, pressure.p_hat);
    return t;
}

namespace {

struct SurfaceTerms {
    std::vector<double> fpp, dv, d_minus, d_plus, sum_plus, sum_minus, quad;
};

SurfaceTerms surface_terms(const SurfaceState& s, const TraceBundle& t) {
    const Grid1D& grid = s.grid();
    const std::size_t n = grid.n();
    if (t.lam_plus1.size() != n || t.grad_p_n.size() != n || t.grad_phat_n.size() != n)
        throw std::invalid_argument("trace bundle does not match the surface grid");
    SurfaceTerms r;
    const auto fp = derivative(grid, s.f.samples);
    r.fpp = derivative(grid, s.f.samples, 2);
    r.dv = derivative(grid, s.v.samples);
    r.d_minus.resize(n);
    r.d_plus.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        r.d_minus[j] = r.dv[j] - r.fpp[j];
        r.d_plus[j] = r.dv[j] + r.fpp[j];
    }
    r.sum_plus.resize(n);
    r.sum_minus.resize(n);
    r.quad.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        r.sum_plus[j] = t.lam_plus1[j] + t.hat_plus1[j];
        r.sum_minus[j] = t.lam_minus1[j] + t.hat_minus1[j];
        r.quad[j] = t.lam_plus1[j] * t.lam_minus1[j] + t.hat_plus1[j] * t.hat_minus1[j];
    }
    dealias_in_place(grid, r.quad);
    return r;
}

}  // namespace

std::vector<double> surface_rhs(const SurfaceState& surface, const TraceBundle& t) {
    const Grid1D& grid = surface.grid();
    const SurfaceTerms r = surface_terms(surface, t);
    const auto a = product(grid, r.sum_plus, r.d_minus);
    const auto b = product(grid, r.sum_minus, r.d_plus);
    const auto c = product(grid, r.quad, r.fpp);
    std::vector<double> out(grid.n());
    for (std::size_t j = 0; j < out.size(); ++j)
        out[j] = r.fpp[j] - 0.5 * a[j] - 0.5 * b[j] - 0.5 * c[j] - 0.5 * (t.grad_p_n[j] + t.grad_phat_n[j]);
    return out;
}

std::vector<double> surface_rhs_regrouped(const SurfaceState& surface, const TraceBundle& t) {
    const Grid1D& grid = surface.grid();
    const SurfaceTerms r = surface_terms(surface, t);
    const std::size_t n = grid.n();
    std::vector<double> total(n), skew(n);
    for (std::size_t j = 0; j < n; ++j) {
        total[j] = r.sum_plus[j] + r.sum_minus[j];
        skew[j] = r.sum_plus[j] - r.sum_minus[j];
    }
    const auto a = product(grid, total, r.dv);
    const auto b = product(grid, skew, r.fpp);
    const auto c = product(grid, r.quad, r.fpp);
    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j)
        out[j] = r.fpp[j] - 0.5 * a[j] + 0.5 * b[j] - 0.5 * c[j] - 0.5 * (t.grad_p_n[j] + t.grad_phat_n[j]);
    return out;
}

double KinematicResidual::max() const {
    double m = 0.0;
    for (const auto* v : {&plus, &minus, &cross_plus, &cross_minus}) m = std::max(m, max_abs(*v));
    return m;
}

KinematicResidual kinematic_residual(const SurfaceState& surface, const ElsasserState& state, const StripPair& strips) {
    const auto fp = derivative(surface.grid(), surface.f.samples);
    const auto& v = surface.v.samples;
    const auto np = normal_trace(state.lam_plus, strips.lower);
    const auto nm = normal_trace(state.lam_minus, strips.lower);
    const auto hp = normal_trace(state.hat_plus, strips.upper);
    const auto hm = normal_trace(state.hat_minus, strips.upper);
    const std::size_t n = fp.size();
    KinematicResidual r{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
    for (std::size_t j = 0; j < n; ++j) {
        r.plus[j] = v[j] + fp[j] - np[j];
        r.minus[j] = v[j] - fp[j] - nm[j];
        r.cross_plus[j] = np[j] - hp[j];
        r.cross_minus[j] = nm[j] - hm[j];
    }
    return r;
}

std::pair<std::vector<double>, std::vector<double>> trace_transport_rhs(
    const Grid1D& grid, Family transported, std::span<const double> trace1, std::span<const double> trace2,
    std::span<const double> carrier1, std::span<const double> grad_p1, std::span<const double> grad_p2) {
    // The transported family moves with the opposite background sign: Lambda(-) with +e1, Lambda(+) with -e1.
    const double background = transported == Family::minus ? 1.0 : -1.0;
    std::vector<double> speed(carrier1.begin(), carrier1.end());
    for (double& c : speed) c += background;
    const auto d1 = derivative(grid, trace1);
    const auto d2 = derivative(grid, trace2);
    auto a = product(grid, speed, d1);
    auto b = product(grid, speed, d2);
    for (std::size_t j = 0; j < a.size(); ++j) {
        a[j] = -a[j] - grad_p1[j];
        b[j] = -b[j] - grad_p2[j];
    }
    return {std::move(a), std::move(b)};
}

AmplitudeBound amplitude_bound(std::span<const AmplitudeSample> history, double mass, double spacing) {
    AmplitudeBound r;
    if (history.empty()) return r;
    const double f0 = history.front().f_sup;
    double sup_plus = 0.0;
    double sup_minus = 0.0;
    for (std::size_t i = 0; i < history.size(); ++i) {
        const AmplitudeSample& s = history[i];
        if (i > 0 && s.time - history[i - 1].time > spacing * (1.0 + 1e-12)) r.sparse = true;
        sup_plus = std::max(sup_plus, (1.0 + s.slope_sup) * s.weighted_plus);
        sup_minus = std::max(sup_minus, (1.0 + s.slope_sup) * s.weighted_minus);
        r.lhs.push_back(s.f_sup);
        r.rhs.push_back(f0 + 0.5 * mass * std::min(sup_plus, sup_minus));
        if (r.lhs.back() > r.rhs.back()) r.holds = false;
    }
    return r;
}

}  // namespace cvs
