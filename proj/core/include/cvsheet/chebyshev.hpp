#pragma once

#include <Eigen/Dense>

#include <memory>
#include <span>
#include <vector>

namespace cvs {

/// Chebyshev-Gauss-Lobatto collocation on the unit interval, nodes ascending from 0 to 1.
class ChebyshevGrid {
public:
    explicit ChebyshevGrid(int n);

    int n() const { return n_; }
    const std::vector<double>& nodes() const { return nodes_; }
    double node(int j) const { return nodes_[j]; }
    /// d/d(eta) and its square
    const Eigen::MatrixXd& d1() const { return d1_; }
    const Eigen::MatrixXd& d2() const { return d2_; }
    /// Clenshaw-Curtis weights on [0, 1]
    const std::vector<double>& weights() const { return weights_; }
    /// Barycentric interpolation of nodal values to eta.
    double interpolate(std::span<const double> values, double eta) const;

private:
    int n_;
    std::vector<double> nodes_;
    std::vector<double> weights_;
    std::vector<double> bary_;
    Eigen::MatrixXd d1_;
    Eigen::MatrixXd d2_;
};

/// Shared instance per point count.
std::shared_ptr<const ChebyshevGrid> chebyshev_grid(int n);

}  // namespace cvs
