#pragma once

#include "cvsheet/chebyshev.hpp"
#include "cvsheet/field2d.hpp"
#include "cvsheet/grid.hpp"
#include "cvsheet/traces.hpp"

#include <memory>
#include <utility>
#include <vector>

namespace cvs {

/// Interface height f and its velocity v = d_t f.
struct SurfaceState {
    SpectralField1D f;
    SpectralField1D v;

    explicit SurfaceState(const Grid1D& grid) : f(grid), v(grid) {}
    SurfaceState(SpectralField1D f_, SpectralField1D v_);

    const Grid1D& grid() const { return f.grid; }
    /// Throws DegenerateMap when |f| exceeds 1 - c0/2 or a sample is not finite.
    void check_clearance(double c0) const;
};

enum class Side { lower, upper };
enum class MapKind { vertical_stretch, harmonic };

/// Reference strip T x [0, 1] in eta mapped onto the physical layer. The lower layer uses
/// y2 = eta - 1 and the upper y2 = eta; x1 = y1 in both. Physical heights are stored per node.
struct MappedStrip {
    Side side;
    MapKind kind;
    Grid1D grid;
    std::shared_ptr<const ChebyshevGrid> cheb;
    std::vector<double> f;
    Field2D x2;

    int n1() const { return grid.n(); }
    int n2() const { return cheb->n(); }
    int interface_row() const { return side == Side::lower ? n2() - 1 : 0; }
    int wall_row() const { return side == Side::lower ? 0 : n2() - 1; }
    /// Reference vertical coordinate of row j2.
    double reference_y2(int j2) const { return side == Side::lower ? cheb->node(j2) - 1.0 : cheb->node(j2); }
    double wall_height() const { return side == Side::lower ? -1.0 : 1.0; }
};

/// Chain-rule data for the map: d/dx1 = d/dy1 + a21 d/deta, d/dx2 = a22 d/deta.
/// The remaining inverse-metric entries are 1 (d/dy1 -> d/dx1) and 0.
struct MetricTerms {
    Grid1D grid;
    std::shared_ptr<const ChebyshevGrid> cheb;
    Field2D jacobian;  ///< d x2 / d eta
    Field2D a21;
    Field2D a22;
    std::vector<double> surface_measure;  ///< |N_f| = sqrt(1 + f'^2)

    Field2D d_y1(const Field2D& u) const;
    Field2D d_eta(const Field2D& u) const;
    Field2D dx1(const Field2D& u) const;
    Field2D dx2(const Field2D& u) const;
    /// (dx1 u, dx2 u) sharing one vertical differentiation.
    std::pair<Field2D, Field2D> gradient(const Field2D& u) const;
    /// int g dx2 over the physical column at each x1.
    std::vector<double> column_integral(const Field2D& g) const;
    /// int int g dx over the physical layer.
    double integrate(const Field2D& g) const;
};

/// Components (-f', 1).
std::pair<SpectralField1D, SpectralField1D> normal_vector(const SurfaceState& surface);

/// Builds the map; c0 is the wall clearance the interface must respect.
MappedStrip build_map(const SurfaceState& surface, Side side, int n2, MapKind kind, double c0 = 0.2);
MetricTerms metric_terms(const MappedStrip& map);

/// d_t x2 at fixed reference coordinates when the interface moves with velocity v.
Field2D mesh_velocity(const MappedStrip& map, const SurfaceState& surface);

/// Cutoff equal to 1 for |x2| <= 1 - c0 and 0 for |x2| >= 1 - c0/2 (quintic smoothstep between).
double lift_cutoff(double x2, double c0);

/// zeta(x2) psi(x1, |f - x2|) with psi(., d) = exp(-d |d1|) d1 f, on the nodes of the map.
Field2D tangential_lift(const SurfaceState& surface, const MappedStrip& map, double c0 = 0.2);

/// Both layers with their metrics, built from one surface snapshot.
struct StripPair {
    MappedStrip lower;
    MappedStrip upper;
    MetricTerms lower_metric;
    MetricTerms upper_metric;

    const MappedStrip& map(Side s) const { return s == Side::lower ? lower : upper; }
    const MetricTerms& metric(Side s) const { return s == Side::lower ? lower_metric : upper_metric; }
};

StripPair build_strips(const SurfaceState& surface, int n2, MapKind kind, double c0 = 0.2);

/// 2(h_l^2 + h_u^2) - (u_l - u_u)^2 from the first-component traces.
std::vector<double> stability_margin(const TraceBundle& traces);

}  // namespace cvs
