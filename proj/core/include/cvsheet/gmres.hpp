#pragma once

#include <functional>
#include <span>

namespace cvs {

using LinearMap = std::function<void(std::span<const double> in, std::span<double> out)>;

struct GmresOptions {
    int max_iterations = 50;
    int restart = 50;
    double tolerance = 1e-9;  ///< on |b - A x| / |b|
    double absolute = 0.0;    ///< residual norm that counts as converged regardless of |b|
};

struct GmresResult {
    int iterations = 0;
    double relative_residual = 0.0;
    bool converged = false;
};

/// Right-preconditioned restarted GMRES. x carries the initial guess on entry.
GmresResult gmres(const LinearMap& op, const LinearMap& precond, std::span<const double> b, std::span<double> x,
                  const GmresOptions& opt);

}  // namespace cvs
