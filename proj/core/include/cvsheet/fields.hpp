#pragma once

#include "cvsheet/geometry.hpp"
#include "cvsheet/gmres.hpp"
#include "cvsheet/spectral.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace cvs {

/// Elsasser perturbations Lambda(+-) = Z(+-) -+ e1 on the lower layer and their hatted counterparts above.
struct ElsasserState {
    Vec2Field lam_plus;
    Vec2Field lam_minus;
    Vec2Field hat_plus;
    Vec2Field hat_minus;
    double time = 0.0;

    ElsasserState() = default;
    ElsasserState(int n1, int n2) : lam_plus(n1, n2), lam_minus(n1, n2), hat_plus(n1, n2), hat_minus(n1, n2) {}

    const Vec2Field& get(Side side, Family fam) const;
    Vec2Field& get(Side side, Family fam);
    double max_abs() const;
    bool finite() const;
};

/// Scalar curls of the four Elsasser fields.
struct VorticityState {
    Field2D plus;
    Field2D minus;
    Field2D hat_plus;
    Field2D hat_minus;

    VorticityState() = default;
    VorticityState(int n1, int n2) : plus(n1, n2), minus(n1, n2), hat_plus(n1, n2), hat_minus(n1, n2) {}

    const Field2D& get(Side side, Family fam) const;
    Field2D& get(Side side, Family fam);
    double max_abs() const;
    bool finite() const;
};

/// (Lambda+, Lambda-) = (u + h - e1, u - h + e1).
std::pair<Vec2Field, Vec2Field> elsasser_from_primitive(const Vec2Field& u, const Vec2Field& h);
/// (u, h) from (Lambda+, Lambda-).
std::pair<Vec2Field, Vec2Field> primitive_from_elsasser(const Vec2Field& lam_plus, const Vec2Field& lam_minus);

Field2D divergence(const Vec2Field& field, const MetricTerms& metric);
/// -d2 F1 + d1 F2
Field2D curl(const Vec2Field& field, const MetricTerms& metric);

struct Reconstruction {
    Vec2Field field;
    Field2D stream;
    GmresResult stats;
};

/// Divergence-free field with the given curl, normal trace N_f.F on the interface and no flux
/// through the wall. Built from a stream function (F = (-d2 psi, d1 psi)) vanishing on the wall.
/// The remaining uniform-flow freedom is fixed by giving the x1-mean of the horizontal flux the
/// value of a uniform stream of speed background_speed.
Reconstruction div_curl_reconstruct(const Field2D& omega, const MappedStrip& map, const MetricTerms& metric,
                                    std::span<const double> normal_trace, double background_speed = 0.0,
                                    double tolerance = 1e-10, const Field2D* guess = nullptr);
Reconstruction div_curl_reconstruct(const Field2D& omega, const SurfaceState& surface, Side side,
                                    std::span<const double> normal_trace, double background_speed = 0.0,
                                    MapKind kind = MapKind::vertical_stretch);

/// Values on the interface row.
std::vector<double> restrict_trace(const Field2D& field, const MappedStrip& map);
/// N_f.F on the interface.
std::vector<double> normal_trace(const Vec2Field& field, const MappedStrip& map);

struct CompatibilityReport {
    double divergence = 0.0;     ///< max |div| over the four fields
    double wall = 0.0;           ///< max |F.e2| on the walls
    double kinematic = 0.0;      ///< max |(v +- f') - N_f.Lambda(+-)| over both layers
    double cross_layer = 0.0;    ///< max |N_f.Lambda(+-) - N_f.hat Lambda(+-)|
    double velocity = 0.0;       ///< max |(Lambda(+-) +- e1).N_f - v|

    double worst() const;
};

CompatibilityReport compatibility_check(const ElsasserState& state, const SurfaceState& surface,
                                        const StripPair& strips);

/// Flat little-endian float64 blob (row-major, eta outer) plus a JSON sidecar.
struct SnapshotMeta {
    std::string field;
    int n1 = 0;
    int n2 = 0;
    std::string map_kind = "vertical-stretch";
    double time = 0.0;
};

void write_snapshot(const std::filesystem::path& stem, const Field2D& field, const SnapshotMeta& meta);
Field2D read_snapshot(const std::filesystem::path& stem, SnapshotMeta* meta = nullptr);

}  // namespace cvs
