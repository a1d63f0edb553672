#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace cvs {

/// Scientific-notation rendering for diagnostics.
inline std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

/// A coordinate map lost invertibility or the interface came too close to a wall.
struct DegenerateMap : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An iterative solve did not reach its tolerance.
struct SolverFailure : std::runtime_error {
    SolverFailure(const std::string& what, double residual_)
        : std::runtime_error(what + " (residual " + sci(residual_) + ")"), residual(residual_) {}
    double residual;
};

/// Data violates a solvability condition.
struct Incompatible : std::domain_error {
    using std::domain_error::domain_error;
};

/// The solution left the admissible set (non-finite values).
struct BlowUp : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace cvs
