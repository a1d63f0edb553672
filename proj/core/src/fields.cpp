#include "cvsheet/fields.hpp"

#include "cvsheet/errors.hpp"
#include "cvsheet/mixed_bvp.hpp"

#include <json.hpp>

#include <bit>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace cvs {

static_assert(std::endian::native == std::endian::little, "snapshot format assumes a little-endian host");

const Vec2Field& ElsasserState::get(Side side, Family fam) const {
    if (side == Side::lower) return fam == Family::plus ? lam_plus : lam_minus;
    return fam == Family::plus ? hat_plus : hat_minus;
}

Vec2Field& ElsasserState::get(Side side, Family fam) {
    return const_cast<Vec2Field&>(std::as_const(*this).get(side, fam));
}

double ElsasserState::max_abs() const {
    return std::max({lam_plus.max_abs(), lam_minus.max_abs(), hat_plus.max_abs(), hat_minus.max_abs()});
}

bool ElsasserState::finite() const {
    return lam_plus.finite() && lam_minus.finite() && hat_plus.finite() && hat_minus.finite();
}

const Field2D& VorticityState::get(Side side, Family fam) const {
    if (side == Side::lower) return fam == Family::plus ? plus : minus;
    return fam == Family::plus ? hat_plus : hat_minus;
}

Field2D& VorticityState::get(Side side, Family fam) {
    return const_cast<Field2D&>(std::as_const(*this).get(side, fam));
}

double VorticityState::max_abs() const {
    return std::max({plus.max_abs(), minus.max_abs(), hat_plus.max_abs(), hat_minus.max_abs()});
}

bool VorticityState::finite() const { return plus.finite() && minus.finite() && hat_plus.finite() && hat_minus.finite(); }

std::pair<Vec2Field, Vec2Field> elsasser_from_primitive(const Vec2Field& u, const Vec2Field& h) {
    Vec2Field plus(u.c1 + h.c1, u.c2 + h.c2);
    Vec2Field minus(u.c1 - h.c1, u.c2 - h.c2);
    for (double& x : plus.c1.data) x -= 1.0;
    for (double& x : minus.c1.data) x += 1.0;
    return {std::move(plus), std::move(minus)};
}

std::pair<Vec2Field, Vec2Field> primitive_from_elsasser(const Vec2Field& lam_plus, const Vec2Field& lam_minus) {
    Vec2Field u(0.5 * (lam_plus.c1 + lam_minus.c1), 0.5 * (lam_plus.c2 + lam_minus.c2));
    Vec2Field h(0.5 * (lam_plus.c1 - lam_minus.c1), 0.5 * (lam_plus.c2 - lam_minus.c2));
    for (double& x : h.c1.data) x += 1.0;
    return {std::move(u), std::move(h)};
}

Field2D divergence(const Vec2Field& field, const MetricTerms& metric) {
    return metric.dx1(field.c1) + metric.dx2(field.c2);
}

Field2D curl(const Vec2Field& field, const MetricTerms& metric) {
    return metric.dx1(field.c2) - metric.dx2(field.c1);
}

Reconstruction div_curl_reconstruct(const Field2D& omega, const MappedStrip& map, const MetricTerms& metric,
                                    std::span<const double> normal_trace, double background_speed, double tolerance,
                                    const Field2D* guess) {
    const int n1 = map.n1();
    const double m = mean(normal_trace);
    if (std::abs(m) > 1e-10) throw Incompatible("normal trace has nonzero mean " + sci(m));
    auto primitive = antiderivative(map.grid, normal_trace, 1e-10);
    const double fm = mean(map.f);
    const double target = map.side == Side::lower ? -background_speed * (1.0 + fm) : background_speed * (1.0 - fm);
    const double shift = target - mean(primitive);
    for (double& x : primitive) x += shift;

    MixedBvp problem;
    problem.source = omega;
    problem.interface_data = std::move(primitive);
    problem.wall_data.assign(n1, 0.0);
    problem.tolerance = tolerance;
    if (guess) problem.initial_guess = *guess;
    BvpResult solved = solve_mixed_bvp(map, metric, problem);

    auto [c2, c1] = metric.gradient(solved.u);
    c1 *= -1.0;
    return {Vec2Field(std::move(c1), std::move(c2)), std::move(solved.u), solved.stats};
}

Reconstruction div_curl_reconstruct(const Field2D& omega, const SurfaceState& surface, Side side,
                                    std::span<const double> normal_trace, double background_speed, MapKind kind) {
    const MappedStrip map = build_map(surface, side, omega.n2, kind);
    const MetricTerms metric = metric_terms(map);
    return div_curl_reconstruct(omega, map, metric, normal_trace, background_speed);
}

std::vector<double> restrict_trace(const Field2D& field, const MappedStrip& map) {
    const auto row = field.row(map.interface_row());
    return {row.begin(), row.end()};
}

std::vector<double> normal_trace(const Vec2Field& field, const MappedStrip& map) {
    const auto fp = derivative(map.grid, map.f);
    const int row = map.interface_row();
    std::vector<double> out(map.n1());
    for (int j1 = 0; j1 < map.n1(); ++j1) out[j1] = -fp[j1] * field.c1(row, j1) + field.c2(row, j1);
    return out;
}

double CompatibilityReport::worst() const { return std::max({divergence, wall, kinematic, cross_layer, velocity}); }

CompatibilityReport compatibility_check(const ElsasserState& state, const SurfaceState& surface,
                                        const StripPair& strips) {
    CompatibilityReport r;
    const auto fp = derivative(surface.grid(), surface.f.samples);
    const auto& v = surface.v.samples;
    for (Side side : {Side::lower, Side::upper}) {
        const MappedStrip& map = strips.map(side);
        for (Family fam : {Family::plus, Family::minus}) {
            const Vec2Field& field = state.get(side, fam);
            r.divergence = std::max(r.divergence, divergence(field, strips.metric(side)).max_abs());
            for (double x : field.c2.row(map.wall_row())) r.wall = std::max(r.wall, std::abs(x));
            const auto nt = normal_trace(field, map);
            const double sg = sign_of(fam);
            for (std::size_t j = 0; j < nt.size(); ++j) {
                r.kinematic = std::max(r.kinematic, std::abs(v[j] + sg * fp[j] - nt[j]));
                // Z.N_f = Lambda.N_f -+ f' for Z = Lambda +- e1
                r.velocity = std::max(r.velocity, std::abs(nt[j] - sg * fp[j] - v[j]));
            }
        }
    }
    for (Family fam : {Family::plus, Family::minus}) {
        const auto lo = normal_trace(state.get(Side::lower, fam), strips.lower);
        const auto up = normal_trace(state.get(Side::upper, fam), strips.upper);
        for (std::size_t j = 0; j < lo.size(); ++j) r.cross_layer = std::max(r.cross_layer, std::abs(lo[j] - up[j]));
    }
    return r;
}

void write_snapshot(const std::filesystem::path& stem, const Field2D& field, const SnapshotMeta& meta) {
    auto bin = stem;
    bin += ".bin";
    auto side = stem;
    side += ".json";
    std::ofstream out(bin, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + bin.string());
    out.write(reinterpret_cast<const char*>(field.data.data()),
              static_cast<std::streamsize>(field.data.size() * sizeof(double)));
    nlohmann::json j{{"field", meta.field},   {"n1", field.n1},         {"n2", field.n2},
                     {"map", meta.map_kind},  {"time", meta.time},      {"dtype", "float64-le"},
                     {"order", "row-major, vertical index outer"}};
    std::ofstream(side) << j.dump(2) << '\n';
    if (!out) throw std::runtime_error("write failed for " + bin.string());
}

Field2D read_snapshot(const std::filesystem::path& stem, SnapshotMeta* meta) {
    auto bin = stem;
    bin += ".bin";
    auto side = stem;
    side += ".json";
    std::ifstream hs(side);
    if (!hs) throw std::runtime_error("missing snapshot header " + side.string());
    nlohmann::json j;
    try {
        hs >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("corrupt snapshot header " + side.string() + ": " + e.what());
    }
    Field2D field(j.at("n1").get<int>(), j.at("n2").get<int>());
    std::ifstream in(bin, std::ios::binary);
    in.read(reinterpret_cast<char*>(field.data.data()), static_cast<std::streamsize>(field.data.size() * sizeof(double)));
    if (!in) throw std::runtime_error("snapshot blob shorter than its header says: " + bin.string());
    if (meta) *meta = {j.at("field").get<std::string>(), field.n1, field.n2, j.at("map").get<std::string>(),
                       j.at("time").get<double>()};
    return field;
}

}  // namespace cvs
