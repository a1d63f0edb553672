#include "oracles.hpp"

#include "cvsheet/rng.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cvs::oracle {

double bessel_potential(double order, double r) {
    if (!(order > 1.0 && order < 2.0)) throw std::invalid_argument("kernel order must lie in (1, 2)");
    const double nu = 0.5 * (order - 1.0);
    const double scale = 1.0 / (std::sqrt(std::numbers::pi) * std::tgamma(0.5 * order));
    r = std::abs(r);
    if (r < 1e-12) return scale * 0.5 * std::tgamma(nu);
    return scale * std::pow(0.5 * r, nu) * boost::math::cyl_bessel_k(nu, r);
}

double bessel_derivative_of_gaussian(double x, double width, double s) {
    const double w2 = width * width;
    auto forced = [&](double y) {
        const double h = std::exp(-y * y / w2);
        return h * (1.0 + 2.0 / w2 - 4.0 * y * y / (w2 * w2));
    };
    const double order = 2.0 - s;
    const double reach = std::abs(x) + 14.0 * width + 40.0;
    boost::math::quadrature::tanh_sinh<double> quad;
    auto integrand = [&](double r) { return bessel_potential(order, r) * (forced(x - r) + forced(x + r)); };
    // The kernel decays like exp(-r); pieces keep the quadrature nodes where the Gaussian lives.
    double total = 0.0;
    double a = 0.0;
    for (double b : {1.0, std::abs(x) + 6.0 * width, reach}) {
        if (b <= a) continue;
        total += quad.integrate(integrand, a, b, 1e-13);
        a = b;
    }
    return total;
}

double coth_neutral_jump(double k, double depth_lower, double depth_upper) {
    // Normal modes of two flat layers: C_l [(w - k u_l)^2 - k^2] + C_u [(w - k u_u)^2 - k^2] = 0 with
    // C = coth(k h). The discriminant vanishes at jump^2 = (C_l + C_u)^2 / (C_l C_u).
    const double cl = 1.0 / std::tanh(k * depth_lower);
    const double cu = 1.0 / std::tanh(k * depth_upper);
    return (cl + cu) / std::sqrt(cl * cu);
}

std::vector<double> random_packet(const Grid1D& grid, std::uint64_t seed, std::uint64_t index, int modes,
                                  double width) {
    CounterRng rng(seed, index * 1024);
    std::vector<double> a(modes), b(modes);
    for (int m = 0; m < modes; ++m) {
        a[m] = rng.uniform(-1.0, 1.0);
        b[m] = rng.uniform(-1.0, 1.0);
    }
    std::vector<double> out(grid.n());
    for (int j = 0; j < grid.n(); ++j) {
        const double x = grid.point(j);
        double sum = 0.0;
        for (int m = 0; m < modes; ++m) {
            const double k = grid.wavenumber(m + 1);
            sum += a[m] * std::cos(k * x) + b[m] * std::sin(k * x);
        }
        out[j] = sum * std::exp(-x * x / (width * width));
    }
    const double m = mean(out);
    const double env_mean = [&] {
        double e = 0.0;
        for (int j = 0; j < grid.n(); ++j) e += std::exp(-grid.point(j) * grid.point(j) / (width * width));
        return e / grid.n();
    }();
    // Remove the mean with the envelope itself so the profile stays localized.
    for (int j = 0; j < grid.n(); ++j) out[j] -= m / env_mean * std::exp(-grid.point(j) * grid.point(j) / (width * width));
    return out;
}

std::vector<double> random_modes(const Grid1D& grid, std::uint64_t seed, std::uint64_t index, int modes,
                                 double amplitude) {
    CounterRng rng(seed, index * 1024);
    std::vector<double> out(grid.n(), 0.0);
    for (int m = 1; m <= modes; ++m) {
        const double a = rng.uniform(-1.0, 1.0) * amplitude / m;
        const double b = rng.uniform(-1.0, 1.0) * amplitude / m;
        const double k = grid.wavenumber(m);
        for (int j = 0; j < grid.n(); ++j) out[j] += a * std::cos(k * grid.point(j)) + b * std::sin(k * grid.point(j));
    }
    return out;
}

std::vector<double> shift_line(const Grid1D& grid, std::span<const double> line, double shift) {
    const Fourier fft(grid.n());
    auto c = fft.forward(line);
    for (int m = 0; m < grid.modes(); ++m) c[m] *= std::exp(Complex(0.0, grid.wavenumber(m) * shift));
    c[grid.modes() - 1] = c[grid.modes() - 1].real();
    return fft.backward(c);
}

Field2D shift_rows(const Grid1D& grid, const Field2D& field, double shift) {
    Field2D out(field.n1, field.n2);
    for (int j2 = 0; j2 < field.n2; ++j2) {
        const auto row = shift_line(grid, field.row(j2), shift);
        std::copy(row.begin(), row.end(), out.row(j2).begin());
    }
    return out;
}

}  // namespace cvs::oracle
