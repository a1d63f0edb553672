#pragma once

#include "cvsheet/chebyshev.hpp"
#include "cvsheet/grid.hpp"

#include <Eigen/Dense>

#include <memory>
#include <span>
#include <vector>

namespace cvs {

enum class BcKind { dirichlet, neumann };

/// Exact per-mode solver for the flat layer of thickness h in reference variables (y1, eta).
///
/// Unknown and residual are stacked n2 x n1 arrays. Row 0 carries the condition at eta = 0,
/// row n2-1 the one at eta = 1, other rows the Laplacian multiplied by h^2, i.e.
/// d_eta^2 u + h^2 d_y1^2 u. Neumann rows are (1/h) d_eta u. With gauge enabled the
/// zero mode is bordered by a scalar multiplier on the interior rows and the constraint
/// sum_j w_j h u_j (one extra trailing entry in both vectors).
class FlatLayerSolver {
public:
    FlatLayerSolver(const Grid1D& grid, int n2, double thickness, BcKind at_zero, BcKind at_one, bool gauge);

    std::size_t size() const;
    void solve(std::span<const double> rhs, std::span<double> out) const;

    static std::shared_ptr<const FlatLayerSolver> shared(const Grid1D& grid, int n2, double thickness, BcKind at_zero,
                                                         BcKind at_one, bool gauge);

private:
    Grid1D grid_;
    int n2_;
    bool gauge_;
    std::vector<Eigen::PartialPivLU<Eigen::MatrixXd>> lu_;
};

/// Exact per-mode solver for the flat two-layer pressure system.
///
/// Layout: lower block (n2 x n1) then upper block (n2 x n1) then one gauge entry.
/// Lower rows: 0 wall Neumann, interior h_l^2 Laplacian, n2-1 continuity p - p_hat.
/// Upper rows: 0 normal-derivative jump, interior h_u^2 Laplacian, n2-1 wall Neumann.
/// Zero mode bordered by a multiplier on all interior rows and the constraint
/// sum_j w_j (h_l p_j + h_u p_hat_j).
class FlatPairSolver {
public:
    FlatPairSolver(const Grid1D& grid, int n2, double lower_thickness, double upper_thickness);

    std::size_t size() const { return 2 * static_cast<std::size_t>(n2_) * grid_.n() + 1; }
    void solve(std::span<const double> rhs, std::span<double> out) const;

    static std::shared_ptr<const FlatPairSolver> shared(const Grid1D& grid, int n2, double lower_thickness,
                                                        double upper_thickness);

private:
    Grid1D grid_;
    int n2_;
    std::vector<Eigen::PartialPivLU<Eigen::MatrixXd>> lu_;
};

}  // namespace cvs
