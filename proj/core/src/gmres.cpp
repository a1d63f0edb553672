#include "cvsheet/gmres.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <vector>

namespace cvs {

GmresResult gmres(const LinearMap& op, const LinearMap& precond, std::span<const double> b, std::span<double> x,
                  const GmresOptions& opt) {
    using Vec = Eigen::VectorXd;
    const Eigen::Index n = static_cast<Eigen::Index>(b.size());
    const Eigen::Map<const Vec> bv(b.data(), n);
    Eigen::Map<Vec> xv(x.data(), n);
    GmresResult res;

    const double bnorm = bv.norm();
    if (bnorm == 0.0) {
        xv.setZero();
        res.converged = true;
        return res;
    }

    Vec r(n), w(n), z(n);
    auto residual = [&]() {
        op(x, std::span<double>(r.data(), n));
        r = bv - r;
        return r.norm();
    };

    const double target = std::max(opt.tolerance * bnorm, opt.absolute);
    double rnorm = residual();
    if (rnorm > bnorm) {
        // A poor initial guess is worse than none.
        xv.setZero();
        r = bv;
        rnorm = bnorm;
    }
    res.relative_residual = rnorm / bnorm;
    if (rnorm <= target) {
        res.converged = true;
        return res;
    }

    const int m = std::max(1, opt.restart);
    std::vector<Vec> basis(m + 1, Vec(n));
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(m + 1, m);
    Vec cs(m), sn(m), g(m + 1);

    Vec best = xv;
    double best_norm = rnorm;
    while (res.iterations < opt.max_iterations) {
        basis[0] = r / rnorm;
        g.setZero();
        g(0) = rnorm;
        h.setZero();
        int k = 0;
        for (; k < m && res.iterations < opt.max_iterations; ++k) {
            ++res.iterations;
            precond(std::span<const double>(basis[k].data(), n), std::span<double>(z.data(), n));
            op(std::span<const double>(z.data(), n), std::span<double>(w.data(), n));
            for (int i = 0; i <= k; ++i) {
                h(i, k) = basis[i].dot(w);
                w -= h(i, k) * basis[i];
            }
            // one reorthogonalisation pass
            for (int i = 0; i <= k; ++i) {
                const double c = basis[i].dot(w);
                h(i, k) += c;
                w -= c * basis[i];
            }
            h(k + 1, k) = w.norm();
            if (h(k + 1, k) > 0.0) basis[k + 1] = w / h(k + 1, k);
            for (int i = 0; i < k; ++i) {
                const double t = cs(i) * h(i, k) + sn(i) * h(i + 1, k);
                h(i + 1, k) = -sn(i) * h(i, k) + cs(i) * h(i + 1, k);
                h(i, k) = t;
            }
            const double denom = std::hypot(h(k, k), h(k + 1, k));
            cs(k) = denom > 0.0 ? h(k, k) / denom : 1.0;
            sn(k) = denom > 0.0 ? h(k + 1, k) / denom : 0.0;
            h(k, k) = denom;
            h(k + 1, k) = 0.0;
            g(k + 1) = -sn(k) * g(k);
            g(k) = cs(k) * g(k);
            if (std::abs(g(k + 1)) <= target) {
                ++k;
                break;
            }
        }
        // y from the triangular system, then x += M^{-1} V y
        Vec y = h.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(g.head(k));
        Vec u = Vec::Zero(n);
        for (int i = 0; i < k; ++i) u += y(i) * basis[i];
        precond(std::span<const double>(u.data(), n), std::span<double>(z.data(), n));
        xv += z;
        rnorm = residual();
        res.relative_residual = rnorm / bnorm;
        if (rnorm <= target) {
            res.converged = true;
            return res;
        }
        if (rnorm >= best_norm) {
            // Restarts no longer help: the residual sits at the roundoff floor of the operator.
            xv = best;
            res.relative_residual = best_norm / bnorm;
            return res;
        }
        best = xv;
        best_norm = rnorm;
    }
    return res;
}

}  // namespace cvs
