#pragma once

#include "cvsheet/elliptic.hpp"
#include "cvsheet/fields.hpp"
#include "cvsheet/geometry.hpp"
#include "cvsheet/traces.hpp"

#include <span>
#include <utility>
#include <vector>

namespace cvs {

/// Interface traces of the state and the normal pressure gradients.
TraceBundle collect_traces(const ElsasserState& state, const PressurePair& pressure, const StripPair& strips);

/// d_t v grouped by characteristic derivatives (v -+ f')'.
std::vector<double> surface_rhs(const SurfaceState& surface, const TraceBundle& traces);
/// Same quantity grouped by d1 v and f''.
std::vector<double> surface_rhs_regrouped(const SurfaceState& surface, const TraceBundle& traces);

struct KinematicResidual {
    std::vector<double> plus;         ///< v + f' - N.Lambda(+)
    std::vector<double> minus;        ///< v - f' - N.Lambda(-)
    std::vector<double> cross_plus;   ///< N.Lambda(+) - N.hat Lambda(+)
    std::vector<double> cross_minus;  ///< N.Lambda(-) - N.hat Lambda(-)

    double max() const;
};

KinematicResidual kinematic_residual(const SurfaceState& surface, const ElsasserState& state, const StripPair& strips);

/// Time derivative of the interface trace of the transported family (both components), from
/// (d_t +- d1) tr Lambda(-+) = -tr Lambda(+-)^1 d1 tr Lambda(-+) - tr grad p.
/// `transported` names the family whose trace is differentiated; carrier1 is the first
/// component of the opposite family's trace.
std::pair<std::vector<double>, std::vector<double>> trace_transport_rhs(
    const Grid1D& grid, Family transported, std::span<const double> trace1, std::span<const double> trace2,
    std::span<const double> carrier1, std::span<const double> grad_p1, std::span<const double> grad_p2);

/// One row of the sup-norm history used by the characteristic amplitude bound.
struct AmplitudeSample {
    double time = 0.0;
    double f_sup = 0.0;           ///< |f|_inf
    double slope_sup = 0.0;       ///< |f'|_inf
    double weighted_plus = 0.0;   ///< |<x1 + t>^{2 mu} Lambda(+)|_inf
    double weighted_minus = 0.0;  ///< |<x1 - t>^{2 mu} Lambda(-)|_inf
};

struct AmplitudeBound {
    std::vector<double> lhs;  ///< measured |f(t)|_inf
    std::vector<double> rhs;  ///< |f0|_inf + M/2 sup (1 + |f'|_inf) |<w>^{2 mu} Lambda|_inf, best family
    bool holds = true;
    bool sparse = false;      ///< some sampling interval exceeds the grid spacing
};

AmplitudeBound amplitude_bound(std::span<const AmplitudeSample> history, double mass, double spacing);

}  // namespace cvs
