#include "cvsheet/vorticity.hpp"

namespace cvs {

Field2D curl_source(const Vec2Field& self, const Vec2Field& other, const MetricTerms& metric) {
    // j = 1 and j = 2 terms of d_j self x grad other^j
    const auto [s1x1, s1x2] = metric.gradient(self.c1);
    const auto [s2x1, s2x2] = metric.gradient(self.c2);
    const auto [o1x1, o1x2] = metric.gradient(other.c1);
    const auto [o2x1, o2x2] = metric.gradient(other.c2);
    Field2D out(self.c1.n1, self.c1.n2);
    for (std::size_t i = 0; i < out.size(); ++i)
        out.data[i] = s1x1.data[i] * o1x2.data[i] - s2x1.data[i] * o1x1.data[i] + s1x2.data[i] * o2x2.data[i] -
                      s2x2.data[i] * o2x1.data[i];
    dealias_rows(metric.grid, out.data);
    return out;
}

Field2D advect(const Field2D& w, const Field2D& c1, const Field2D& c2, const MetricTerms& metric) {
    const auto [wx1, wx2] = metric.gradient(w);
    Field2D out(w.n1, w.n2);
    for (std::size_t i = 0; i < out.size(); ++i) out.data[i] = -(c1.data[i] * wx1.data[i] + c2.data[i] * wx2.data[i]);
    dealias_rows(metric.grid, out.data);
    return out;
}

namespace {

Field2D transport(const Field2D& w, const Vec2Field& carrier, double background, const Vec2Field& self,
                  const MetricTerms& metric, const Field2D* mesh) {
    Field2D c1 = carrier.c1;
    for (double& x : c1.data) x += background;
    Field2D c2 = carrier.c2;
    if (mesh) c2 -= *mesh;
    Field2D out = advect(w, c1, c2, metric);
    out += curl_source(self, carrier, metric);
    return out;
}

}  // namespace

VorticityState curl_transport_rhs(const VorticityState& vort, const ElsasserState& state, const StripPair& strips,
                                  const std::optional<MeshMotion>& mesh) {
    const Field2D* ml = mesh ? &mesh->lower : nullptr;
    const Field2D* mu = mesh ? &mesh->upper : nullptr;
    VorticityState out;
    out.plus = transport(vort.plus, state.lam_minus, -1.0, state.lam_plus, strips.lower_metric, ml);
    out.minus = transport(vort.minus, state.lam_plus, 1.0, state.lam_minus, strips.lower_metric, ml);
    out.hat_plus = transport(vort.hat_plus, state.hat_minus, -1.0, state.hat_plus, strips.upper_metric, mu);
    out.hat_minus = transport(vort.hat_minus, state.hat_plus, 1.0, state.hat_minus, strips.upper_metric, mu);
    return out;
}

}  // namespace cvs
