#include "cvsheet/geometry.hpp"

#include "cvsheet/errors.hpp"
#include "cvsheet/flat_strip.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cvs {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Laplace solve on the unit reference strip with Dirichlet rows at eta = 0 and eta = 1.
Field2D harmonic_fill(const Grid1D& grid, int n2, std::span<const double> at_zero, std::span<const double> at_one) {
    const int n1 = grid.n();
    Field2D rhs(n1, n2);
    std::copy(at_zero.begin(), at_zero.end(), rhs.row(0).begin());
    std::copy(at_one.begin(), at_one.end(), rhs.row(n2 - 1).begin());
    Field2D out(n1, n2);
    FlatLayerSolver::shared(grid, n2, 1.0, BcKind::dirichlet, BcKind::dirichlet, false)->solve(rhs.data, out.data);
    return out;
}

}  // namespace

SurfaceState::SurfaceState(SpectralField1D f_, SpectralField1D v_) : f(std::move(f_)), v(std::move(v_)) {
    if (!(f.grid == v.grid)) throw std::invalid_argument("surface height and velocity on different grids");
}

void SurfaceState::check_clearance(double c0) const {
    if (!f.finite() || !v.finite()) throw DegenerateMap("interface data not finite");
    const double amp = max_abs(f.samples);
    if (amp > 1.0 - 0.5 * c0)
        throw DegenerateMap("interface amplitude " + std::to_string(amp) + " violates wall clearance " +
                            std::to_string(1.0 - 0.5 * c0));
}

Field2D MetricTerms::d_y1(const Field2D& u) const {
    Field2D out(u.n1, u.n2);
    derivative_rows(grid, u.data, out.data, 1);
    return out;
}

Field2D MetricTerms::d_eta(const Field2D& u) const {
    Field2D out(u.n1, u.n2);
    Eigen::Map<const RowMatrix> in(u.data.data(), u.n2, u.n1);
    Eigen::Map<RowMatrix> res(out.data.data(), u.n2, u.n1);
    res.noalias() = cheb->d1() * in;
    return out;
}

Field2D MetricTerms::dx1(const Field2D& u) const {
    Field2D out = d_y1(u);
    const Field2D de = d_eta(u);
    for (std::size_t i = 0; i < out.size(); ++i) out.data[i] += a21.data[i] * de.data[i];
    return out;
}

Field2D MetricTerms::dx2(const Field2D& u) const { return hadamard(a22, d_eta(u)); }

std::pair<Field2D, Field2D> MetricTerms::gradient(const Field2D& u) const {
    std::pair<Field2D, Field2D> out{d_y1(u), d_eta(u)};
    auto& [g1, g2] = out;
    for (std::size_t i = 0; i < g1.size(); ++i) {
        g1.data[i] += a21.data[i] * g2.data[i];
        g2.data[i] *= a22.data[i];
    }
    return out;
}

std::vector<double> MetricTerms::column_integral(const Field2D& g) const {
    std::vector<double> out(g.n1, 0.0);
    const auto& w = cheb->weights();
    for (int j2 = 0; j2 < g.n2; ++j2)
        for (int j1 = 0; j1 < g.n1; ++j1) out[j1] += w[j2] * jacobian(j2, j1) * g(j2, j1);
    return out;
}

double MetricTerms::integrate(const Field2D& g) const {
    double s = 0.0;
    for (double c : column_integral(g)) s += c;
    return s * grid.spacing();
}

std::pair<SpectralField1D, SpectralField1D> normal_vector(const SurfaceState& surface) {
    auto d = derivative(surface.grid(), surface.f.samples);
    for (double& x : d) x = -x;
    return {SpectralField1D(surface.grid(), std::move(d)),
            SpectralField1D(surface.grid(), std::vector<double>(surface.grid().n(), 1.0))};
}

MappedStrip build_map(const SurfaceState& surface, Side side, int n2, MapKind kind, double c0) {
    surface.check_clearance(c0);
    const Grid1D& grid = surface.grid();
    const int n1 = grid.n();
    MappedStrip map{side, kind, grid, chebyshev_grid(n2), surface.f.samples, Field2D(n1, n2)};
    const auto& f = surface.f.samples;
    if (kind == MapKind::vertical_stretch) {
        for (int j2 = 0; j2 < n2; ++j2) {
            const double eta = map.cheb->node(j2);
            for (int j1 = 0; j1 < n1; ++j1)
                map.x2(j2, j1) = side == Side::lower ? -1.0 + eta * (1.0 + f[j1]) : f[j1] + eta * (1.0 - f[j1]);
        }
    } else {
        const std::vector<double> wall(n1, map.wall_height());
        map.x2 = side == Side::lower ? harmonic_fill(grid, n2, wall, f) : harmonic_fill(grid, n2, f, wall);
    }
    // Boundary rows are exact by construction.
    std::copy(f.begin(), f.end(), map.x2.row(map.interface_row()).begin());
    for (double& x : map.x2.row(map.wall_row())) x = map.wall_height();
    return map;
}

MetricTerms metric_terms(const MappedStrip& map) {
    MetricTerms m{map.grid, map.cheb, Field2D(), Field2D(), Field2D(), {}};
    m.jacobian = m.d_eta(map.x2);
    const Field2D dy1 = m.d_y1(map.x2);
    m.a21 = Field2D(map.n1(), map.n2());
    m.a22 = Field2D(map.n1(), map.n2());
    for (std::size_t i = 0; i < dy1.size(); ++i) {
        const double j = m.jacobian.data[i];
        if (!(j > 1e-6)) throw DegenerateMap("map Jacobian " + sci(j) + " below floor");
        m.a22.data[i] = 1.0 / j;
        m.a21.data[i] = -dy1.data[i] / j;
    }
    const auto fp = derivative(map.grid, map.f);
    m.surface_measure.resize(fp.size());
    for (std::size_t i = 0; i < fp.size(); ++i) m.surface_measure[i] = std::sqrt(1.0 + fp[i] * fp[i]);
    return m;
}

StripPair build_strips(const SurfaceState& surface, int n2, MapKind kind, double c0) {
    MappedStrip lower = build_map(surface, Side::lower, n2, kind, c0);
    MappedStrip upper = build_map(surface, Side::upper, n2, kind, c0);
    MetricTerms lm = metric_terms(lower);
    MetricTerms um = metric_terms(upper);
    return {std::move(lower), std::move(upper), std::move(lm), std::move(um)};
}

Field2D mesh_velocity(const MappedStrip& map, const SurfaceState& surface) {
    const int n1 = map.n1();
    const int n2 = map.n2();
    const auto& v = surface.v.samples;
    if (map.kind == MapKind::harmonic) {
        const std::vector<double> zero(n1, 0.0);
        return map.side == Side::lower ? harmonic_fill(map.grid, n2, zero, v) : harmonic_fill(map.grid, n2, v, zero);
    }
    Field2D out(n1, n2);
    for (int j2 = 0; j2 < n2; ++j2) {
        const double eta = map.cheb->node(j2);
        const double share = map.side == Side::lower ? eta : 1.0 - eta;
        for (int j1 = 0; j1 < n1; ++j1) out(j2, j1) = share * v[j1];
    }
    return out;
}

double lift_cutoff(double x2, double c0) {
    const double inner = 1.0 - c0;
    const double outer = 1.0 - 0.5 * c0;
    const double a = std::abs(x2);
    if (a <= inner) return 1.0;
    if (a >= outer) return 0.0;
    const double s = (a - inner) / (outer - inner);
    return 1.0 - s * s * s * (10.0 - 15.0 * s + 6.0 * s * s);
}

Field2D tangential_lift(const SurfaceState& surface, const MappedStrip& map, double c0) {
    const Grid1D& grid = map.grid;
    const int n1 = grid.n();
    const int modes = grid.modes();
    const auto slope = Fourier(n1).forward(derivative(grid, surface.f.samples));
    // e^{i k (x - x_0)} table (the transform is referenced to the first sample, not to x = 0),
    // weights 2 for interior modes of the half spectrum.
    std::vector<Complex> phase(static_cast<std::size_t>(n1) * modes);
    for (int j1 = 0; j1 < n1; ++j1)
        for (int m = 0; m < modes; ++m) {
            const double w = (m == 0 || m == modes - 1) ? 1.0 : 2.0;
            phase[static_cast<std::size_t>(j1) * modes + m] =
                w * slope[m] * std::polar(1.0, grid.wavenumber(m) * j1 * grid.spacing());
        }
    Field2D out(n1, map.n2());
    const auto& f = surface.f.samples;
    for (int j2 = 0; j2 < map.n2(); ++j2)
        for (int j1 = 0; j1 < n1; ++j1) {
            const double x2 = map.x2(j2, j1);
            const double zeta = lift_cutoff(x2, c0);
            if (zeta == 0.0) continue;
            const double depth = std::abs(f[j1] - x2);
            double s = 0.0;
            for (int m = 0; m < modes; ++m)
                s += (phase[static_cast<std::size_t>(j1) * modes + m] * std::exp(-grid.wavenumber(m) * depth)).real();
            out(j2, j1) = zeta * s;
        }
    return out;
}

std::vector<double> stability_margin(const TraceBundle& traces) {
    const std::size_t n = traces.lam_plus1.size();
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double u_l = 0.5 * (traces.lam_plus1[i] + traces.lam_minus1[i]);
        const double u_u = 0.5 * (traces.hat_plus1[i] + traces.hat_minus1[i]);
        const double b_l = 1.0 + 0.5 * (traces.lam_plus1[i] - traces.lam_minus1[i]);
        const double b_u = 1.0 + 0.5 * (traces.hat_plus1[i] - traces.hat_minus1[i]);
        out[i] = 2.0 * (b_l * b_l + b_u * b_u) - (u_l - u_u) * (u_l - u_u);
    }
    return out;
}

}  // namespace cvs
