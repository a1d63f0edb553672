#pragma once

#include "cvsheet/fields.hpp"
#include "cvsheet/geometry.hpp"
#include "cvsheet/gmres.hpp"
#include "cvsheet/mixed_bvp.hpp"
#include "cvsheet/traces.hpp"

#include <optional>
#include <span>
#include <vector>

namespace cvs {

/// Total pressure below (p) and above (p_hat) the interface.
struct PressurePair {
    Field2D p;
    Field2D p_hat;

    const Field2D& get(Side s) const { return s == Side::lower ? p : p_hat; }
};

/// Right-hand side of N_f.grad p - N_f.grad p_hat on the interface.
struct JumpData {
    std::vector<double> g_jump;
};

/// Uses lam_*1 / hat_*1 of the bundle together with f and v; the pressure entries are ignored.
JumpData assemble_jump(const SurfaceState& surface, const TraceBundle& traces);

/// Flux Lambda(-)^j d_j Lambda(+)^i of one layer, products dealiased along x1.
Vec2Field pressure_flux(const Vec2Field& lam_minus, const Vec2Field& lam_plus, const MetricTerms& metric);
/// -div of the flux.
Field2D pressure_source(const Vec2Field& lam_minus, const Vec2Field& lam_plus, const MetricTerms& metric);

struct PressureOptions {
    double tolerance = 1e-10;
    int max_iterations = 300;
    std::optional<PressurePair> guess;
};

struct PressureReport {
    double interior = 0.0;    ///< max |Laplacian p - source| over both layers
    double continuity = 0.0;  ///< max |p - p_hat| on the interface
    double jump = 0.0;        ///< max |N.grad p - N.grad p_hat - g|
    double wall = 0.0;        ///< max |d_x2 p| on both walls
    double multiplier = 0.0;  ///< compatibility scalar absorbed by the interior rows
    GmresResult stats;
};

/// Two-layer Neumann-jump problem; the constant is fixed by a zero x1-mean of the identity residual.
PressurePair solve_pressure(const ElsasserState& state, const SurfaceState& surface, const StripPair& strips,
                            const PressureOptions& options = {}, PressureReport* report = nullptr);

/// Residual of the pressure identity as a function of x1.
std::vector<double> pressure_identity_residual(const PressurePair& pp, const ElsasserState& state,
                                               const StripPair& strips);

struct PressureParts {
    PressurePair harmonic;  ///< harmonic, equal to p on the interface
    PressurePair forced;    ///< full source, zero on the interface
};

PressureParts decompose_pressure(const PressurePair& pp, const ElsasserState& state, const StripPair& strips,
                                 double tolerance = 1e-10);

/// N_f.grad of the harmonic extension of phi (zero wall flux). The upper operator carries a minus
/// sign so both sides are nonnegative. The data sit on the boundary rows only, so the relative
/// residual floor is higher than for sourced solves; 1e-9 stays above it up to n2 = 65.
std::vector<double> dirichlet_neumann(const SurfaceState& surface, std::span<const double> phi, Side side, int n2 = 33,
                                      MapKind kind = MapKind::vertical_stretch);
std::vector<double> dirichlet_neumann(const MappedStrip& map, const MetricTerms& metric, std::span<const double> phi,
                                      double tolerance = 1e-9);

}  // namespace cvs
