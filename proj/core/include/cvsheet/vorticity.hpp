#pragma once

#include "cvsheet/fields.hpp"
#include "cvsheet/geometry.hpp"

#include <optional>

namespace cvs {

/// Vertical velocity of the reference nodes in each layer.
struct MeshMotion {
    Field2D lower;
    Field2D upper;
};

/// sum_j d_j Lambda(self) x grad Lambda(other)^j with a x b = a1 b2 - a2 b1, dealiased along x1.
Field2D curl_source(const Vec2Field& self, const Vec2Field& other, const MetricTerms& metric);

/// -(c1 d_x1 w + c2 d_x2 w), products dealiased along x1.
Field2D advect(const Field2D& w, const Field2D& c1, const Field2D& c2, const MetricTerms& metric);

/// Time derivative of the four curls at fixed reference coordinates:
/// d_t w(+) = -Z(-).grad w(+) + source, Z(-) = Lambda(-) - e1, and symmetrically for w(-) with
/// Z(+) = Lambda(+) + e1. With mesh motion the term mesh * d_x2 w is added.
VorticityState curl_transport_rhs(const VorticityState& vort, const ElsasserState& state, const StripPair& strips,
                                  const std::optional<MeshMotion>& mesh = std::nullopt);

}  // namespace cvs
