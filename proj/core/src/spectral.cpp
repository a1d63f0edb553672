#include "cvsheet/spectral.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>

namespace cvs {

namespace {

void require_finite(const SpectralField1D& g, const char* what) {
    if (!g.finite()) throw std::invalid_argument(std::string(what) + ": non-finite input");
}

}  // namespace

SpectralField1D fractional_derivative(const SpectralField1D& g, double s) {
    require_finite(g, "fractional_derivative");
    auto out = apply_symbol(g.grid, g.samples, [s](double k) { return Complex(std::pow(1.0 + k * k, 0.5 * s)); });
    return {g.grid, std::move(out)};
}

SpectralField1D poisson_extension(const SpectralField1D& phi, double depth) {
    if (!(depth >= 0.0)) throw std::invalid_argument("poisson_extension: negative depth");
    require_finite(phi, "poisson_extension");
    auto out = apply_symbol(phi.grid, phi.samples, [depth](double k) { return Complex(std::exp(-depth * std::abs(k))); });
    return {phi.grid, std::move(out)};
}

void WeightSpec::validate() const {
    if (!(mu > 0.5 && mu <= 0.6))
        throw std::domain_error("decay exponent mu = " + std::to_string(mu) +
                                " outside the admissible range 1/2 < mu <= 3/5");
    if (!(t >= 0.0)) throw std::domain_error("weight time must be nonnegative");
    if (window < 0.0) throw std::domain_error("weight window must be nonnegative");
}

std::vector<double> weight_samples(const Grid1D& grid, const WeightSpec& spec, Family sign, double power) {
    spec.validate();
    std::vector<double> w(grid.n());
    const double shift = sign_of(sign) * spec.t;
    for (int j = 0; j < grid.n(); ++j) w[j] = std::pow(bracket(grid.point(j) + shift), power);
    return w;
}

SupportReport support_monitor(const Grid1D& grid, std::span<const double> g, double window) {
    const double half = window > 0.0 ? window : 0.5 * grid.length();
    double total = 0.0, edge = 0.0, outside = 0.0;
    for (int j = 0; j < grid.n(); ++j) {
        const double x = std::abs(grid.point(j));
        const double m = g[j] * g[j];
        total += m;
        if (x > half)
            outside += m;
        else if (x >= 0.95 * half)
            edge += m;
    }
    SupportReport r;
    if (total > 0.0) {
        r.edge_fraction = edge / total;
        r.outside_fraction = outside / total;
    }
    r.flagged = r.edge_fraction > 1e-8 || r.outside_fraction > 1e-8;
    return r;
}

GhostTable::GhostTable(double mu) : mu_(mu) {
    if (!(mu > 0.5)) throw std::domain_error("ghost table requires mu > 1/2");
    const int count = 2048;
    const double umax = std::asinh(1e6);
    nodes_.resize(count + 1);
    values_.resize(count + 1);
    for (int i = 0; i <= count; ++i) nodes_[i] = std::sinh(umax * i / count);
    auto integrand = [mu](double tau) { return std::pow(1.0 + tau * tau, -mu); };
    values_[0] = 0.0;
    for (int i = 1; i <= count; ++i) {
        const double piece = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
            integrand, nodes_[i - 1], nodes_[i], 8, 1e-14);
        values_[i] = values_[i - 1] + piece;
    }
    q_inf_ = values_.back() + tail(nodes_.back());
}

double GhostTable::tail(double theta) const {
    // int_theta^inf (1+tau^2)^{-mu} dtau via tau = 1/s and a short binomial series (theta >= 1e6)
    const double s = 1.0 / theta;
    const double a = 2.0 * mu_;
    return std::pow(s, a - 1.0) / (a - 1.0) - mu_ * std::pow(s, a + 1.0) / (a + 1.0) +
           0.5 * mu_ * (mu_ + 1.0) * std::pow(s, a + 3.0) / (a + 3.0);
}

double GhostTable::operator()(double theta) const {
    const double x = std::abs(theta);
    const double sgn = theta < 0.0 ? -1.0 : 1.0;
    if (x >= nodes_.back()) return sgn * (q_inf_ - tail(x));
    const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - nodes_.begin()) - 1;
    const double x0 = nodes_[i], x1 = nodes_[i + 1];
    const double h = x1 - x0;
    const double u = (x - x0) / h;
    const double d0 = std::pow(1.0 + x0 * x0, -mu_) * h;
    const double d1 = std::pow(1.0 + x1 * x1, -mu_) * h;
    const double h00 = (1 + 2 * u) * (1 - u) * (1 - u);
    const double h10 = u * (1 - u) * (1 - u);
    const double h01 = u * u * (3 - 2 * u);
    const double h11 = u * u * (u - 1);
    return sgn * (h00 * values_[i] + h10 * d0 + h01 * values_[i + 1] + h11 * d1);
}

std::shared_ptr<const GhostTable> ghost_table(double mu) {
    static std::mutex m;
    static std::map<double, std::shared_ptr<const GhostTable>> cache;
    std::lock_guard lock(m);
    auto it = cache.find(mu);
    if (it != cache.end()) return it->second;
    auto t = std::make_shared<const GhostTable>(mu);
    cache.emplace(mu, t);
    return t;
}

std::vector<double> ghost_factor(const Grid1D& grid, const WeightSpec& spec, Family sign) {
    spec.validate();
    const auto q = ghost_table(spec.mu);
    std::vector<double> out(grid.n());
    for (int j = 0; j < grid.n(); ++j) {
        const double x = grid.point(j);
        const double arg = sign == Family::plus ? x - spec.t : -(x + spec.t);
        out[j] = std::exp((*q)(arg));
    }
    return out;
}

double mass_constant(double mu) {
    if (!(mu > 0.5)) throw std::domain_error("mass constant diverges for mu <= 1/2");
    // int_0^1 <z>^{-2mu} dz + int_0^1 s^{2mu-2} <s>^{-2mu} ds, the second from z = 1/s
    boost::math::quadrature::tanh_sinh<double> ts;
    const double near = ts.integrate([mu](double z) { return std::pow(1.0 + z * z, -mu); }, 0.0, 1.0);
    const double far = ts.integrate(
        [mu](double s) { return std::pow(s, 2.0 * mu - 2.0) * std::pow(1.0 + s * s, -mu); }, 0.0, 1.0);
    return 2.0 * (near + far);
}

double mass_constant(const WeightSpec& spec) { return mass_constant(spec.mu); }

double commutator_ratio(const SpectralField1D& g, double s, const WeightSpec& spec, Family sign, double power) {
    if (!(s > 0.0 && s < 1.0)) throw std::domain_error("commutator_ratio requires 0 < s < 1");
    const auto w = weight_samples(g.grid, spec, sign, power);
    std::vector<double> wg(g.size());
    for (std::size_t j = 0; j < wg.size(); ++j) wg[j] = w[j] * g[j];
    const double denom = l2_norm(g.grid, wg);
    if (!(denom > 0.0)) throw std::domain_error("commutator_ratio: zero weighted norm");
    const auto a = fractional_derivative(SpectralField1D(g.grid, wg), s);
    const auto b = fractional_derivative(g, s);
    std::vector<double> c(g.size());
    for (std::size_t j = 0; j < c.size(); ++j) c[j] = a[j] - w[j] * b[j];
    return l2_norm(g.grid, c) / denom;
}

}  // namespace cvs
