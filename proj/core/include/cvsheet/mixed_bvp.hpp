#pragma once

#include "cvsheet/flat_strip.hpp"
#include "cvsheet/geometry.hpp"
#include "cvsheet/gmres.hpp"

#include <optional>
#include <vector>

namespace cvs {

/// Poisson problem on one mapped layer: Laplacian u = source in the physical layer.
/// Neumann data at the interface is N_f.grad u with N_f = (-f', 1) for both sides; at the wall it is d_x2 u.
struct MixedBvp {
    Field2D source;
    BcKind at_interface = BcKind::dirichlet;
    BcKind at_wall = BcKind::dirichlet;
    std::vector<double> interface_data;
    std::vector<double> wall_data;
    /// Fix the constant of a pure Neumann problem by int u dx = 0.
    bool zero_mean_gauge = false;
    std::optional<Field2D> initial_guess;
    double tolerance = 1e-10;
    int max_iterations = 200;
};

struct BvpResult {
    Field2D u;
    GmresResult stats;
};

/// Throws std::invalid_argument for an unconstrained problem, Incompatible when pure Neumann data
/// violates the flux balance, SolverFailure on non-convergence.
BvpResult solve_mixed_bvp(const MappedStrip& map, const MetricTerms& metric, const MixedBvp& problem);

/// Physical Laplacian through the chain rule.
Field2D mapped_laplacian(const MetricTerms& metric, const Field2D& u);
/// Per-row projection onto the Nyquist mode. Chained spectral first derivatives annihilate that mode,
/// which leaves the pure Neumann operators singular along it; adding -h^2 k^2 times this projection
/// to the interior rows restores the flat symbol there.
Field2D nyquist_component(const Field2D& u);

/// N_f.grad u on the interface row.
std::vector<double> interface_normal_derivative(const MappedStrip& map, const MetricTerms& metric, const Field2D& u);

}  // namespace cvs
