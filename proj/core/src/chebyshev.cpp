#include "cvsheet/chebyshev.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace cvs {

ChebyshevGrid::ChebyshevGrid(int n) : n_(n) {
    if (n < 3) throw std::invalid_argument("Chebyshev grid needs at least 3 points");
    const int N = n - 1;
    const double pi = std::numbers::pi;
    std::vector<double> x(n);
    nodes_.resize(n);
    for (int j = 0; j < n; ++j) {
        x[j] = std::cos(pi * j / N);
        nodes_[j] = 0.5 * (1.0 - x[j]);
    }
    nodes_.front() = 0.0;
    nodes_.back() = 1.0;

    // Differentiation on [-1, 1] with x descending, then d/d(eta) = -2 d/dx.
    Eigen::MatrixXd dx = Eigen::MatrixXd::Zero(n, n);
    auto c = [&](int j) { return (j == 0 || j == N) ? 2.0 : 1.0; };
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const double sgn = ((i + j) % 2 == 0) ? 1.0 : -1.0;
            dx(i, j) = c(i) / c(j) * sgn / (x[i] - x[j]);
        }
    }
    for (int i = 0; i < n; ++i) dx(i, i) = -dx.row(i).sum();
    d1_ = -2.0 * dx;
    d2_ = d1_ * d1_;

    // Clenshaw-Curtis weights on [-1, 1] halved for [0, 1].
    weights_.assign(n, 0.0);
    for (int k = 0; k <= N; ++k) {
        const double theta = pi * k / N;
        double w = 1.0;
        for (int j = 1; j <= N / 2; ++j) {
            const double b = (2 * j == N) ? 1.0 : 2.0;
            w -= b * std::cos(2.0 * j * theta) / (4.0 * j * j - 1.0);
        }
        const double ck = (k == 0 || k == N) ? 1.0 : 2.0;
        weights_[k] = 0.5 * ck * w / N;
    }

    bary_.resize(n);
    for (int j = 0; j < n; ++j) bary_[j] = ((j % 2 == 0) ? 1.0 : -1.0) * ((j == 0 || j == N) ? 0.5 : 1.0);
}

double ChebyshevGrid::interpolate(std::span<const double> values, double eta) const {
    double num = 0.0, den = 0.0;
    for (int j = 0; j < n_; ++j) {
        const double d = eta - nodes_[j];
        if (d == 0.0) return values[j];
        const double w = bary_[j] / d;
        num += w * values[j];
        den += w;
    }
    return num / den;
}

std::shared_ptr<const ChebyshevGrid> chebyshev_grid(int n) {
    static std::mutex mutex;
    static std::map<int, std::shared_ptr<const ChebyshevGrid>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[n];
    if (!slot) slot = std::make_shared<const ChebyshevGrid>(n);
    return slot;
}

}  // namespace cvs
