#include "cvsheet/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace cvs {

Grid1D::Grid1D(int n, double length) : n_(n), length_(length) {
    if (n < 8 || (n & (n - 1)) != 0)
        throw std::invalid_argument("grid size must be a power of two >= 8, got " + std::to_string(n));
    if (!(length > 0.0) || !std::isfinite(length))
        throw std::invalid_argument("grid length must be positive and finite");
}

std::vector<double> Grid1D::points() const {
    std::vector<double> x(n_);
    for (int j = 0; j < n_; ++j) x[j] = point(j);
    return x;
}

double Grid1D::wavenumber(int m) const { return 2.0 * std::numbers::pi * m / length_; }

struct Fourier::Plans {
    fftw_plan r2c = nullptr;
    fftw_plan c2r = nullptr;
    ~Plans() {
        if (r2c) fftw_destroy_plan(r2c);
        if (c2r) fftw_destroy_plan(c2r);
    }
};

namespace {

std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

Fourier::Fourier(int n) : n_(n) {
    static std::map<int, std::shared_ptr<const Plans>> cache;
    std::lock_guard lock(plan_mutex());
    auto it = cache.find(n);
    if (it != cache.end()) {
        plans_ = it->second;
        return;
    }
    auto p = std::make_shared<Plans>();
    std::vector<double> x(n);
    std::vector<fftw_complex> c(n / 2 + 1);
    const unsigned flags = FFTW_MEASURE | FFTW_UNALIGNED;
    p->r2c = fftw_plan_dft_r2c_1d(n, x.data(), c.data(), flags);
    p->c2r = fftw_plan_dft_c2r_1d(n, c.data(), x.data(), flags);
    if (!p->r2c || !p->c2r) throw std::runtime_error("FFTW plan creation failed");
    plans_ = p;
    cache.emplace(n, p);
}

void Fourier::forward(std::span<const double> x, std::span<Complex> c) const {
    // r2c does not modify its input.
    fftw_execute_dft_r2c(plans_->r2c, const_cast<double*>(x.data()),
                         reinterpret_cast<fftw_complex*>(c.data()));
    const double scale = 1.0 / n_;
    for (auto& v : c) v *= scale;
}

void Fourier::backward(std::span<const Complex> c, std::span<double> x) const {
    thread_local std::vector<Complex> scratch;
    scratch.assign(c.begin(), c.end());
    fftw_execute_dft_c2r(plans_->c2r, reinterpret_cast<fftw_complex*>(scratch.data()), x.data());
}

std::vector<Complex> Fourier::forward(std::span<const double> x) const {
    std::vector<Complex> c(n_ / 2 + 1);
    forward(x, c);
    return c;
}

std::vector<double> Fourier::backward(std::span<const Complex> c) const {
    std::vector<double> x(n_);
    backward(c, x);
    return x;
}

SpectralField1D::SpectralField1D(Grid1D g, std::vector<double> s) : grid(g), samples(std::move(s)) {
    if (static_cast<int>(samples.size()) != grid.n())
        throw std::invalid_argument("sample count does not match grid");
}

SpectralField1D::SpectralField1D(Grid1D g) : grid(g), samples(g.n(), 0.0) {}

std::vector<Complex> SpectralField1D::spectrum() const { return Fourier(grid.n()).forward(samples); }

bool SpectralField1D::finite() const {
    return std::all_of(samples.begin(), samples.end(), [](double v) { return std::isfinite(v); });
}

std::vector<double> apply_symbol(const Grid1D& grid, std::span<const double> x, const Symbol& symbol) {
    Fourier fft(grid.n());
    auto c = fft.forward(x);
    const int nyq = grid.n() / 2;
    for (int m = 0; m < grid.modes(); ++m) {
        Complex s = symbol(grid.wavenumber(m));
        if (m == nyq) s = s.real();
        c[m] *= s;
    }
    return fft.backward(c);
}

std::vector<double> derivative(const Grid1D& grid, std::span<const double> x, int order) {
    std::vector<double> out(x.size());
    derivative_rows(grid, x, out, order);
    return out;
}

void dealias_in_place(const Grid1D& grid, std::span<double> x) { dealias_rows(grid, x); }

std::vector<double> dealias(const Grid1D& grid, std::span<const double> x) {
    std::vector<double> out(x.begin(), x.end());
    dealias_rows(grid, out);
    return out;
}

std::vector<double> product(const Grid1D& grid, std::span<const double> a, std::span<const double> b) {
    std::vector<double> out(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) out[j] = a[j] * b[j];
    dealias_rows(grid, out);
    return out;
}

std::vector<double> antiderivative(const Grid1D& grid, std::span<const double> x, double tol) {
    const double m = mean(x);
    if (std::abs(m) > tol)
        throw std::domain_error("antiderivative of a field with nonzero mean (" + std::to_string(m) + ")");
    Fourier fft(grid.n());
    auto c = fft.forward(x);
    c[0] = 0.0;
    const int nyq = grid.n() / 2;
    for (int m2 = 1; m2 < grid.modes(); ++m2) {
        if (m2 == nyq) {
            c[m2] = 0.0;
            continue;
        }
        c[m2] /= Complex(0.0, grid.wavenumber(m2));
    }
    return fft.backward(c);
}

double mean(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v;
    return x.empty() ? 0.0 : s / static_cast<double>(x.size());
}

double max_abs(std::span<const double> x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

double l2_norm(const Grid1D& grid, std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s * grid.spacing());
}

void derivative_rows(const Grid1D& grid, std::span<const double> in, std::span<double> out, int order) {
    const int n = grid.n();
    if (in.size() % n != 0 || out.size() != in.size())
        throw std::invalid_argument("derivative_rows: size mismatch");
    Fourier fft(n);
    std::vector<Complex> c(grid.modes());
    std::vector<Complex> factor(grid.modes());
    const int nyq = n / 2;
    for (int m = 0; m < grid.modes(); ++m) {
        const double kp = std::pow(grid.wavenumber(m), order);
        static constexpr Complex unit_powers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        Complex f = kp * unit_powers[order % 4];
        if (m == nyq && order % 2 == 1) f = 0.0;
        factor[m] = f;
    }
    const std::size_t rows = in.size() / n;
    for (std::size_t r = 0; r < rows; ++r) {
        fft.forward(in.subspan(r * n, n), c);
        for (int m = 0; m < grid.modes(); ++m) c[m] *= factor[m];
        fft.backward(c, out.subspan(r * n, n));
    }
}

void dealias_rows(const Grid1D& grid, std::span<double> data) {
    const int n = grid.n();
    Fourier fft(n);
    std::vector<Complex> c(grid.modes());
    const int cut = grid.dealias_limit();
    const std::size_t rows = data.size() / n;
    for (std::size_t r = 0; r < rows; ++r) {
        auto row = data.subspan(r * n, n);
        fft.forward(row, c);
        for (int m = cut + 1; m < grid.modes(); ++m) c[m] = 0.0;
        fft.backward(c, row);
    }
}

}  // namespace cvs
