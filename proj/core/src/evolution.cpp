#include "cvsheet/evolution.hpp"

#include "cvsheet/errors.hpp"
#include "cvsheet/surface.hpp"

#include <json.hpp>

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace cvs {

double Background::speed(Side side, Family fam) const {
    if (side == Side::lower) return fam == Family::plus ? lower_plus : lower_minus;
    return fam == Family::plus ? upper_plus : upper_minus;
}

Background Background::shear(double jump, double b) {
    const double ul = -0.5 * jump;
    const double uu = 0.5 * jump;
    return {ul + b - 1.0, ul - b + 1.0, uu + b - 1.0, uu - b + 1.0};
}

SimState make_state(SurfaceState surface, VorticityState vort, const Background& background, const ModelConfig& model,
                    double time) {
    const int n1 = surface.grid().n();
    SimState s{std::move(surface), std::move(vort), ElsasserState(n1, model.n2), PressurePair{}, background, time, 0,
               nullptr};
    refresh(s, model);
    return s;
}

void refresh(SimState& s, const ModelConfig& model) {
    const Grid1D& grid = s.grid();
    const std::size_t n = grid.n();
    if (!s.surface.f.finite() || !s.surface.v.finite() || !s.vort.finite())
        throw BlowUp("non-finite prognostic data at t = " + std::to_string(s.time));
    s.strips = std::make_shared<const StripPair>(build_strips(s.surface, model.n2, model.map, model.c0));
    const auto fp = derivative(grid, s.surface.f.samples);
    std::vector<double> kin_plus(n), kin_minus(n);
    for (std::size_t j = 0; j < n; ++j) {
        kin_plus[j] = s.surface.v.samples[j] + fp[j];
        kin_minus[j] = s.surface.v.samples[j] - fp[j];
    }
    for (Side side : {Side::lower, Side::upper})
        for (Family fam : {Family::plus, Family::minus}) {
            const auto& kin = fam == Family::plus ? kin_plus : kin_minus;
            s.elsasser.get(side, fam) =
                div_curl_reconstruct(s.vort.get(side, fam), s.strips->map(side), s.strips->metric(side), kin,
                                     s.background.speed(side, fam), model.elliptic_tol)
                    .field;
        }
    s.elsasser.time = s.time;
    PressureOptions opt;
    opt.tolerance = model.pressure_tol;
    opt.max_iterations = model.elliptic_max_iter;
    if (s.pressure.p.n1 == static_cast<int>(n) && s.pressure.p.n2 == model.n2) opt.guess = s.pressure;
    s.pressure = solve_pressure(s.elsasser, s.surface, *s.strips, opt);
}

double cfl_dt(const SimState& s, double safety) {
    double speed = 0.0;
    for (Side side : {Side::lower, Side::upper})
        for (Family fam : {Family::plus, Family::minus}) {
            const Vec2Field& f = s.elsasser.get(side, fam);
            for (std::size_t i = 0; i < f.c1.size(); ++i) speed = std::max(speed, std::hypot(f.c1.data[i], f.c2.data[i]));
        }
    const double slope = max_abs(derivative(s.grid(), s.surface.f.samples));
    return safety * s.grid().spacing() / (1.0 + speed + slope);
}

namespace {

void remove_mean(std::vector<double>& x) {
    const double m = mean(x);
    for (double& v : x) v -= m;
}

MeshMotion mesh_of(const SimState& s) {
    return {mesh_velocity(s.strips->lower, s.surface), mesh_velocity(s.strips->upper, s.surface)};
}

VorticityState combine(const VorticityState& a, double c, const VorticityState& d) {
    VorticityState out = a;
    out.plus.axpy(c, d.plus);
    out.minus.axpy(c, d.minus);
    out.hat_plus.axpy(c, d.hat_plus);
    out.hat_minus.axpy(c, d.hat_minus);
    return out;
}

std::vector<double> combine(const std::vector<double>& a, double c, const std::vector<double>& d) {
    std::vector<double> out(a);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += c * d[i];
    return out;
}

void filter(SimState& s) {
    const Grid1D& g = s.grid();
    dealias_in_place(g, s.surface.f.samples);
    dealias_in_place(g, s.surface.v.samples);
    for (Field2D* w : {&s.vort.plus, &s.vort.minus, &s.vort.hat_plus, &s.vort.hat_minus}) dealias_rows(g, w->data);
}

SimState stage(const SimState& base, double c, const Derivative& d, const ModelConfig& model) {
    SimState s = base;
    s.surface.f.samples = combine(base.surface.f.samples, c, d.df);
    s.surface.v.samples = combine(base.surface.v.samples, c, d.dv);
    s.vort = combine(base.vort, c, d.dw);
    s.time = base.time + c;
    refresh(s, model);
    return s;
}

}  // namespace

Derivative rhs_full(const SimState& s, const ModelConfig&) {
    const TraceBundle traces = collect_traces(s.elsasser, s.pressure, *s.strips);
    Derivative d;
    d.df = s.surface.v.samples;
    d.dv = surface_rhs(s.surface, traces);
    remove_mean(d.dv);
    d.dw = curl_transport_rhs(s.vort, s.elsasser, *s.strips, mesh_of(s));
    return d;
}

SimState advance_rk4(const SimState& s0, double dt, const ModelConfig& model) {
    if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
    const double limit = cfl_dt(s0, 1.0);
    if (dt > limit * (1.0 + 1e-12))
        throw std::invalid_argument("time step " + sci(dt) + " exceeds the CFL limit " + sci(limit));
    const Derivative k1 = rhs_full(s0, model);
    const SimState s1 = stage(s0, 0.5 * dt, k1, model);
    const Derivative k2 = rhs_full(s1, model);
    const SimState s2 = stage(s0, 0.5 * dt, k2, model);
    const Derivative k3 = rhs_full(s2, model);
    const SimState s3 = stage(s0, dt, k3, model);
    const Derivative k4 = rhs_full(s3, model);

    SimState out = s0;
    auto blend = [&](const std::vector<double>& base, auto member) {
        std::vector<double> r(base);
        for (std::size_t i = 0; i < r.size(); ++i)
            r[i] += dt / 6.0 * ((k1.*member)[i] + 2.0 * (k2.*member)[i] + 2.0 * (k3.*member)[i] + (k4.*member)[i]);
        return r;
    };
    out.surface.f.samples = blend(s0.surface.f.samples, &Derivative::df);
    out.surface.v.samples = blend(s0.surface.v.samples, &Derivative::dv);
    out.vort = combine(combine(combine(combine(s0.vort, dt / 6.0, k1.dw), dt / 3.0, k2.dw), dt / 3.0, k3.dw), dt / 6.0,
                       k4.dw);
    out.time = s0.time + dt;
    out.step = s0.step + 1;
    filter(out);
    refresh(out, model);
    return out;
}

namespace {

// Interface operator with frozen traces and no pressure: linear in (f, v), zero-mean output.
std::vector<double> frozen_surface(const Grid1D& grid, const TraceBundle& frozen, const std::vector<double>& f,
                                   const std::vector<double>& v) {
    auto r = surface_rhs(SurfaceState(SpectralField1D(grid, f), SpectralField1D(grid, v)), frozen);
    remove_mean(r);
    return r;
}

// Trapezoidal update of (f, v) with lagged traces and pressure forcing from `lag`.
std::pair<std::vector<double>, std::vector<double>> surface_trapezoid(const SimState& s0, const Derivative& d0,
                                                                      const SimState& lag, double dt, double tol) {
    const Grid1D& grid = s0.grid();
    const std::size_t n = grid.n();
    TraceBundle full = collect_traces(lag.elsasser, lag.pressure, *lag.strips);
    TraceBundle frozen = full;
    std::fill(frozen.grad_p_n.begin(), frozen.grad_p_n.end(), 0.0);
    std::fill(frozen.grad_phat_n.begin(), frozen.grad_phat_n.end(), 0.0);
    std::vector<double> forcing(n);
    for (std::size_t j = 0; j < n; ++j) forcing[j] = -0.5 * (full.grad_p_n[j] + full.grad_phat_n[j]);
    remove_mean(forcing);

    const auto& f0 = s0.surface.f.samples;
    const auto& v0 = s0.surface.v.samples;
    const double h = 0.5 * dt;
    // v1 - h H(h v1, v1) = v0 + h d0 + h (H(f0 + h v0, 0) + forcing)
    std::vector<double> fpart = combine(f0, h, v0);
    const auto known = frozen_surface(grid, frozen, fpart, std::vector<double>(n, 0.0));
    std::vector<double> rhs(n);
    for (std::size_t j = 0; j < n; ++j) rhs[j] = v0[j] + h * d0.dv[j] + h * (known[j] + forcing[j]);

    const LinearMap op = [&](std::span<const double> in, std::span<double> out) {
        std::vector<double> v(in.begin(), in.end());
        std::vector<double> f(n);
        for (std::size_t j = 0; j < n; ++j) f[j] = h * v[j];
        const auto hv = frozen_surface(grid, frozen, f, v);
        for (std::size_t j = 0; j < n; ++j) out[j] = v[j] - h * hv[j];
    };
    // Mean-coefficient symbol: H ~ a f'' - c v'.
    double a = 0.0;
    double c = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        a += 1.0 + 0.5 * (frozen.lam_plus1[j] + frozen.hat_plus1[j] - frozen.lam_minus1[j] - frozen.hat_minus1[j]) -
             0.5 * (frozen.lam_plus1[j] * frozen.lam_minus1[j] + frozen.hat_plus1[j] * frozen.hat_minus1[j]);
        c += 0.5 * (frozen.lam_plus1[j] + frozen.hat_plus1[j] + frozen.lam_minus1[j] + frozen.hat_minus1[j]);
    }
    a /= static_cast<double>(n);
    c /= static_cast<double>(n);
    const LinearMap precond = [&](std::span<const double> in, std::span<double> out) {
        const auto r = apply_symbol(grid, in, [&](double k) {
            return 1.0 / (Complex(1.0 + h * h * a * k * k, h * c * k));
        });
        std::copy(r.begin(), r.end(), out.begin());
    };
    std::vector<double> v1(v0);
    GmresOptions opt;
    opt.tolerance = tol;
    opt.max_iterations = 200;
    const GmresResult res = gmres(op, precond, rhs, v1, opt);
    if (!res.converged) throw SolverFailure("implicit interface step did not converge", res.relative_residual);
    remove_mean(v1);
    std::vector<double> f1(n);
    for (std::size_t j = 0; j < n; ++j) f1[j] = f0[j] + h * (v0[j] + v1[j]);
    return {std::move(f1), std::move(v1)};
}

// Trapezoidal update of one curl with frozen carrier, mesh motion and source from `lag`.
Field2D curl_trapezoid(const Field2D& w0, const Field2D& dw0, const Vec2Field& carrier, double background,
                       const Vec2Field& self, const Field2D& mesh, const MetricTerms& metric, double dt, double tol) {
    const int n1 = w0.n1;
    const int n2 = w0.n2;
    const double h = 0.5 * dt;
    Field2D c1 = carrier.c1;
    for (double& x : c1.data) x += background;
    Field2D c2 = carrier.c2 - mesh;
    const Field2D src = curl_source(self, carrier, metric);

    std::vector<double> rhs(w0.size());
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = w0.data[i] + h * (dw0.data[i] + src.data[i]);
    const LinearMap op = [&](std::span<const double> in, std::span<double> out) {
        Field2D w(n1, n2);
        std::copy(in.begin(), in.end(), w.data.begin());
        const Field2D a = advect(w, c1, c2, metric);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = w.data[i] - h * a.data[i];
    };
    double speed = 0.0;
    for (double x : c1.data) speed += x;
    speed /= static_cast<double>(c1.size());
    const Grid1D& grid = metric.grid;
    const LinearMap precond = [&](std::span<const double> in, std::span<double> out) {
        for (int j2 = 0; j2 < n2; ++j2) {
            const auto r = apply_symbol(grid, in.subspan(static_cast<std::size_t>(j2) * n1, n1),
                                        [&](double k) { return 1.0 / Complex(1.0, h * speed * k); });
            std::copy(r.begin(), r.end(), out.begin() + static_cast<std::ptrdiff_t>(j2) * n1);
        }
    };
    Field2D w1 = w0;
    GmresOptions opt;
    opt.tolerance = tol;
    opt.max_iterations = 200;
    const GmresResult res = gmres(op, precond, rhs, w1.data, opt);
    if (!res.converged) throw SolverFailure("implicit curl step did not converge", res.relative_residual);
    return w1;
}

double increment(const SimState& a, const SimState& b) {
    double d = 0.0;
    double scale = 0.0;
    auto acc = [&](const std::vector<double>& x, const std::vector<double>& y) {
        for (std::size_t i = 0; i < x.size(); ++i) {
            d += (x[i] - y[i]) * (x[i] - y[i]);
            scale += y[i] * y[i];
        }
    };
    acc(a.surface.f.samples, b.surface.f.samples);
    acc(a.surface.v.samples, b.surface.v.samples);
    for (Side side : {Side::lower, Side::upper})
        for (Family fam : {Family::plus, Family::minus}) acc(a.vort.get(side, fam).data, b.vort.get(side, fam).data);
    return std::sqrt(d) / std::max(1.0, std::sqrt(scale));
}

SimState picard_once(const SimState& s0, double dt, const ModelConfig& model, const StepperConfig& cfg,
                     PicardStats& stats, bool& failed) {
    failed = false;
    const Derivative d0 = rhs_full(s0, model);
    SimState lag = s0;
    double previous = INFINITY;
    int growth = 0;
    for (int it = 1; it <= cfg.picard_max; ++it) {
        SimState next = s0;
        auto [f1, v1] = surface_trapezoid(s0, d0, lag, dt, 1e-3 * cfg.picard_tol);
        next.surface.f.samples = std::move(f1);
        next.surface.v.samples = std::move(v1);
        const MeshMotion mesh = mesh_of(lag);
        const double tol = 1e-3 * cfg.picard_tol;
        for (Side side : {Side::lower, Side::upper}) {
            const MetricTerms& metric = lag.strips->metric(side);
            const Field2D& m = side == Side::lower ? mesh.lower : mesh.upper;
            for (Family fam : {Family::plus, Family::minus}) {
                const Family other = opposite(fam);
                const double bg = fam == Family::plus ? -1.0 : 1.0;
                next.vort.get(side, fam) =
                    curl_trapezoid(s0.vort.get(side, fam), d0.dw.get(side, fam), lag.elsasser.get(side, other), bg,
                                   lag.elsasser.get(side, fam), m, metric, dt, tol);
            }
        }
        next.time = s0.time + dt;
        next.step = s0.step + 1;
        filter(next);
        refresh(next, model);
        const double inc = increment(next, lag);
        stats.increments.push_back(inc);
        stats.iterations = it;
        if (inc < cfg.picard_tol) return next;
        growth = inc > previous ? growth + 1 : 0;
        if (growth >= 3) break;
        previous = inc;
        lag = std::move(next);
    }
    failed = true;
    return s0;
}

}  // namespace

SimState advance_picard(const SimState& s0, double dt, const ModelConfig& model, const StepperConfig& cfg,
                        PicardStats* stats) {
    if (!(cfg.picard_tol > 0.0)) throw std::invalid_argument("Picard tolerance must be positive");
    if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
    PicardStats local;
    PicardStats& st = stats ? *stats : local;
    st = {};
    bool failed = false;
    SimState out = picard_once(s0, dt, model, cfg, st, failed);
    if (!failed) return out;
    // Non-contraction: retry as successively halved sub-steps.
    for (int level = 1; level <= 3; ++level) {
        ++st.halvings;
        const int parts = 1 << level;
        const double h = dt / parts;
        SimState s = s0;
        bool ok = true;
        for (int p = 0; p < parts && ok; ++p) {
            s = picard_once(s, h, model, cfg, st, failed);
            ok = !failed;
        }
        if (ok) {
            s.step = s0.step + 1;
            return s;
        }
    }
    throw SolverFailure("Picard iteration failed to contract after halving the step three times",
                        st.increments.empty() ? INFINITY : st.increments.back());
}

std::vector<double> hyperbolicity_profile(const TraceBundle& traces) {
    auto m = stability_margin(traces);
    for (double& x : m) x *= 0.25;
    return m;
}

double hyperbolicity_monitor(const SimState& s) {
    const TraceBundle t = collect_traces(s.elsasser, s.pressure, *s.strips);
    const auto prof = hyperbolicity_profile(t);
    return *std::min_element(prof.begin(), prof.end());
}

namespace {

constexpr char kMagic[8] = {'C', 'V', 'S', 'H', 'E', 'E', 'T', '1'};
constexpr int kVersion = 1;

std::uint64_t bits(double x) { return std::bit_cast<std::uint64_t>(x); }
double from_bits(std::uint64_t b) { return std::bit_cast<double>(b); }

std::uint64_t fnv1a(const std::vector<char>& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    return h;
}

std::vector<const std::vector<double>*> blob_list(const SimState& s) {
    const ElsasserState& e = s.elsasser;
    return {&s.surface.f.samples, &s.surface.v.samples, &s.vort.plus.data,  &s.vort.minus.data,
            &s.vort.hat_plus.data, &s.vort.hat_minus.data, &e.lam_plus.c1.data, &e.lam_plus.c2.data,
            &e.lam_minus.c1.data, &e.lam_minus.c2.data,  &e.hat_plus.c1.data, &e.hat_plus.c2.data,
            &e.hat_minus.c1.data, &e.hat_minus.c2.data,  &s.pressure.p.data,  &s.pressure.p_hat.data};
}

}  // namespace

void checkpoint(const SimState& s, const ModelConfig& model, const std::filesystem::path& path) {
    std::vector<char> payload;
    for (const auto* blob : blob_list(s)) {
        const auto* p = reinterpret_cast<const char*>(blob->data());
        payload.insert(payload.end(), p, p + blob->size() * sizeof(double));
    }
    nlohmann::json h{{"version", kVersion},
                     {"n1", s.grid().n()},
                     {"n2", model.n2},
                     {"length", bits(s.grid().length())},
                     {"time", bits(s.time)},
                     {"step", s.step},
                     {"background",
                      {bits(s.background.lower_plus), bits(s.background.lower_minus), bits(s.background.upper_plus),
                       bits(s.background.upper_minus)}},
                     {"map", model.map == MapKind::harmonic ? "harmonic" : "vertical-stretch"},
                     {"c0", bits(model.c0)},
                     {"elliptic_tol", bits(model.elliptic_tol)},
                     {"pressure_tol", bits(model.pressure_tol)},
                     {"elliptic_max_iter", model.elliptic_max_iter},
                     {"payload_bytes", payload.size()},
                     {"checksum", fnv1a(payload)}};
    const std::string header = h.dump();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open checkpoint " + path.string());
    out.write(kMagic, sizeof kMagic);
    const std::uint64_t len = header.size();
    out.write(reinterpret_cast<const char*>(&len), sizeof len);
    out.write(header.data(), static_cast<std::streamsize>(header.size()));
    out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    if (!out) throw std::runtime_error("checkpoint write failed: " + path.string());
}

Restored restore(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open checkpoint " + path.string());
    char magic[8];
    in.read(magic, sizeof magic);
    if (!in || std::memcmp(magic, kMagic, sizeof magic) != 0)
        throw std::runtime_error("not a checkpoint file: " + path.string());
    std::uint64_t len = 0;
    in.read(reinterpret_cast<char*>(&len), sizeof len);
    if (!in || len > (1u << 20)) throw std::runtime_error("corrupt checkpoint header length");
    std::string header(len, '\0');
    in.read(header.data(), static_cast<std::streamsize>(len));
    if (!in) throw std::runtime_error("truncated checkpoint header");
    nlohmann::json h;
    try {
        h = nlohmann::json::parse(header);
        if (h.at("version").get<int>() != kVersion)
            throw std::runtime_error("checkpoint version " + std::to_string(h.at("version").get<int>()) +
                                     " is not supported");
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("corrupt checkpoint header: ") + e.what());
    }
    try {
        const int n1 = h.at("n1").get<int>();
        ModelConfig model;
        model.n2 = h.at("n2").get<int>();
        model.map = h.at("map").get<std::string>() == "harmonic" ? MapKind::harmonic : MapKind::vertical_stretch;
        model.c0 = from_bits(h.at("c0").get<std::uint64_t>());
        model.elliptic_tol = from_bits(h.at("elliptic_tol").get<std::uint64_t>());
        model.pressure_tol = from_bits(h.at("pressure_tol").get<std::uint64_t>());
        model.elliptic_max_iter = h.at("elliptic_max_iter").get<int>();
        const Grid1D grid(n1, from_bits(h.at("length").get<std::uint64_t>()));
        const auto bg = h.at("background").get<std::vector<std::uint64_t>>();
        if (bg.size() != 4) throw std::runtime_error("corrupt checkpoint background");

        SimState s{SurfaceState(grid), VorticityState(n1, model.n2), ElsasserState(n1, model.n2),
                   PressurePair{Field2D(n1, model.n2), Field2D(n1, model.n2)},
                   Background{from_bits(bg[0]), from_bits(bg[1]), from_bits(bg[2]), from_bits(bg[3])},
                   from_bits(h.at("time").get<std::uint64_t>()), h.at("step").get<long>(), nullptr};
        const std::size_t bytes = h.at("payload_bytes").get<std::size_t>();
        std::vector<char> payload(bytes);
        in.read(payload.data(), static_cast<std::streamsize>(bytes));
        if (!in) throw std::runtime_error("truncated checkpoint payload");
        if (fnv1a(payload) != h.at("checksum").get<std::uint64_t>())
            throw std::runtime_error("checkpoint checksum mismatch");
        std::size_t offset = 0;
        for (const auto* blob : blob_list(s)) {
            auto* dst = const_cast<std::vector<double>*>(blob);
            const std::size_t nb = dst->size() * sizeof(double);
            if (offset + nb > bytes) throw std::runtime_error("checkpoint payload smaller than its shape");
            std::memcpy(dst->data(), payload.data() + offset, nb);
            offset += nb;
        }
        if (offset != bytes) throw std::runtime_error("checkpoint payload larger than its shape");
        s.elsasser.time = s.time;
        s.strips = std::make_shared<const StripPair>(build_strips(s.surface, model.n2, model.map, model.c0));
        return {std::move(s), model};
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("corrupt checkpoint header: ") + e.what());
    }
}

}  // namespace cvs
