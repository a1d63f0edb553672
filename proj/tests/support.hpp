#pragma once

#include "cvsheet/evolution.hpp"
#include "cvsheet/spectral.hpp"

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

namespace cvs::test {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

inline std::vector<double> sample(const Grid1D& grid, auto&& fn) {
    std::vector<double> out(grid.n());
    for (int j = 0; j < grid.n(); ++j) out[j] = fn(grid.point(j));
    return out;
}

inline double max_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double max_diff(const Field2D& a, const Field2D& b) { return max_diff(a.data, b.data); }

/// Zero prognostic data on top of a background, refreshed into a full state.
inline SimState background_state(const Grid1D& grid, const Background& bg, const ModelConfig& model = {}) {
    return make_state(SurfaceState(grid), VorticityState(grid.n(), model.n2), bg, model);
}

}  // namespace cvs::test
