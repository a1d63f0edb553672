#include "cvsheet/mixed_bvp.hpp"

#include "cvsheet/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace cvs {

Field2D mapped_laplacian(const MetricTerms& metric, const Field2D& u) {
    const auto [ux1, ux2] = metric.gradient(u);
    Field2D out = metric.dx1(ux1);
    out += metric.dx2(ux2);
    return out;
}

Field2D nyquist_component(const Field2D& u) {
    Field2D out(u.n1, u.n2);
    for (int j2 = 0; j2 < u.n2; ++j2) {
        double c = 0.0;
        for (int j1 = 0; j1 < u.n1; ++j1) c += (j1 % 2 ? -1.0 : 1.0) * u(j2, j1);
        c /= u.n1;
        for (int j1 = 0; j1 < u.n1; ++j1) out(j2, j1) = j1 % 2 ? -c : c;
    }
    return out;
}

std::vector<double> interface_normal_derivative(const MappedStrip& map, const MetricTerms& metric, const Field2D& u) {
    const int row = map.interface_row();
    const auto [ux1, ux2] = metric.gradient(u);
    const auto fp = derivative(map.grid, map.f);
    std::vector<double> out(map.n1());
    for (int j1 = 0; j1 < map.n1(); ++j1) out[j1] = -fp[j1] * ux1(row, j1) + ux2(row, j1);
    return out;
}

BvpResult solve_mixed_bvp(const MappedStrip& map, const MetricTerms& metric, const MixedBvp& problem) {
    const int n1 = map.n1();
    const int n2 = map.n2();
    const bool pure_neumann = problem.at_interface == BcKind::neumann && problem.at_wall == BcKind::neumann;
    if (pure_neumann && !problem.zero_mean_gauge)
        throw std::invalid_argument("pure Neumann problem without a gauge constraint is singular");
    if (!pure_neumann && problem.zero_mean_gauge)
        throw std::invalid_argument("gauge constraint only applies to the pure Neumann problem");
    if (problem.source.n1 != n1 || problem.source.n2 != n2 || static_cast<int>(problem.interface_data.size()) != n1 ||
        static_cast<int>(problem.wall_data.size()) != n1)
        throw std::invalid_argument("boundary value problem data does not match the strip");

    const int irow = map.interface_row();
    const int wrow = map.wall_row();
    const double h = map.side == Side::lower ? 1.0 + mean(map.f) : 1.0 - mean(map.f);

    if (pure_neumann) {
        // Outward normal is +N_f for the lower layer at the interface and -e2 at its wall; reversed above.
        const double dx = map.grid.spacing();
        double flux = 0.0;
        double scale = 0.0;
        for (int j1 = 0; j1 < n1; ++j1) {
            flux += (problem.interface_data[j1] - problem.wall_data[j1]) * dx;
            scale += (std::abs(problem.interface_data[j1]) + std::abs(problem.wall_data[j1])) * dx;
        }
        if (map.side == Side::upper) flux = -flux;
        Field2D abs_source = problem.source;
        for (double& x : abs_source.data) x = std::abs(x);
        const double balance = metric.integrate(problem.source) - flux;
        scale += metric.integrate(abs_source);
        if (std::abs(balance) > 1e-8 * std::max(1.0, scale))
            throw Incompatible("Neumann data violates the flux balance by " + sci(balance));
    }

    const auto fp = derivative(map.grid, map.f);
    const double k_nyq = map.grid.wavenumber(n1 / 2);
    const double nyq_shift = h * h * k_nyq * k_nyq;
    const std::size_t block = static_cast<std::size_t>(n1) * n2;
    const std::size_t size = block + (pure_neumann ? 1 : 0);

    auto boundary_row = [&](const Field2D& u, const Field2D& ux1, const Field2D& ux2, int row, BcKind kind,
                            bool interface, std::span<double> out) {
        for (int j1 = 0; j1 < n1; ++j1) {
            if (kind == BcKind::dirichlet)
                out[j1] = u(row, j1);
            else
                out[j1] = interface ? -fp[j1] * ux1(row, j1) + ux2(row, j1) : ux2(row, j1);
        }
    };

    const LinearMap op = [&](std::span<const double> in, std::span<double> out) {
        Field2D u(n1, n2);
        std::copy(in.begin(), in.begin() + block, u.data.begin());
        const double lambda = pure_neumann ? in[block] : 0.0;
        const auto [ux1, ux2] = metric.gradient(u);
        const Field2D lap = metric.dx1(ux1) + metric.dx2(ux2);
        const Field2D nyq = pure_neumann ? nyquist_component(u) : Field2D(n1, n2);
        for (int j2 = 1; j2 < n2 - 1; ++j2)
            for (int j1 = 0; j1 < n1; ++j1) {
                const double j = metric.jacobian(j2, j1);
                out[static_cast<std::size_t>(j2) * n1 + j1] = j * j * lap(j2, j1) - nyq_shift * nyq(j2, j1) + lambda;
            }
        boundary_row(u, ux1, ux2, irow, problem.at_interface, true,
                     out.subspan(static_cast<std::size_t>(irow) * n1, n1));
        boundary_row(u, ux1, ux2, wrow, problem.at_wall, false, out.subspan(static_cast<std::size_t>(wrow) * n1, n1));
        if (pure_neumann) out[block] = metric.integrate(u) / map.grid.length();
    };

    const BcKind at_zero = map.side == Side::lower ? problem.at_wall : problem.at_interface;
    const BcKind at_one = map.side == Side::lower ? problem.at_interface : problem.at_wall;
    const auto flat = FlatLayerSolver::shared(map.grid, n2, h, at_zero, at_one, pure_neumann);
    const LinearMap precond = [&](std::span<const double> in, std::span<double> out) { flat->solve(in, out); };

    std::vector<double> rhs(size, 0.0);
    for (int j2 = 1; j2 < n2 - 1; ++j2)
        for (int j1 = 0; j1 < n1; ++j1) {
            const double j = metric.jacobian(j2, j1);
            rhs[static_cast<std::size_t>(j2) * n1 + j1] = j * j * problem.source(j2, j1);
        }
    std::copy(problem.interface_data.begin(), problem.interface_data.end(),
              rhs.begin() + static_cast<std::ptrdiff_t>(irow) * n1);
    std::copy(problem.wall_data.begin(), problem.wall_data.end(), rhs.begin() + static_cast<std::ptrdiff_t>(wrow) * n1);

    std::vector<double> x(size, 0.0);
    if (problem.initial_guess && problem.initial_guess->same_shape(problem.source))
        std::copy(problem.initial_guess->data.begin(), problem.initial_guess->data.end(), x.begin());
    GmresOptions opt;
    opt.tolerance = problem.tolerance;
    opt.max_iterations = problem.max_iterations;
    opt.restart = 60;
    const GmresResult stats = gmres(op, precond, rhs, x, opt);
    if (!stats.converged) throw SolverFailure("mixed boundary value problem did not converge", stats.relative_residual);
    BvpResult result{Field2D(n1, n2), stats};
    std::copy(x.begin(), x.begin() + block, result.u.data.begin());
    return result;
}

}  // namespace cvs
