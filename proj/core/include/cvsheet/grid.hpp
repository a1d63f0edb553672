#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace cvs {

using Complex = std::complex<double>;

/// Uniform periodic grid x_j = -L/2 + j L/n, j = 0..n-1.
class Grid1D {
public:
    Grid1D(int n, double length);

    int n() const { return n_; }
    double length() const { return length_; }
    double spacing() const { return length_ / n_; }
    double point(int j) const { return -0.5 * length_ + j * spacing(); }
    std::vector<double> points() const;

    /// Number of stored half-spectrum coefficients (n/2 + 1).
    int modes() const { return n_ / 2 + 1; }
    /// Angular wavenumber of half-spectrum index m.
    double wavenumber(int m) const;
    /// Largest retained index under the 2/3 rule.
    int dealias_limit() const { return n_ / 3; }

    bool operator==(const Grid1D& o) const { return n_ == o.n_ && length_ == o.length_; }

private:
    int n_;
    double length_;
};

/// Real-to-complex transform of fixed length. Forward output is normalised by 1/n.
/// Plans are built once per length and shared; execution is reentrant.
class Fourier {
public:
    explicit Fourier(int n);

    int n() const { return n_; }
    void forward(std::span<const double> x, std::span<Complex> c) const;
    void backward(std::span<const Complex> c, std::span<double> x) const;

    std::vector<Complex> forward(std::span<const double> x) const;
    std::vector<double> backward(std::span<const Complex> c) const;

private:
    struct Plans;
    int n_;
    std::shared_ptr<const Plans> plans_;
};

/// Samples of a real periodic function on a Grid1D.
struct SpectralField1D {
    Grid1D grid;
    std::vector<double> samples;

    SpectralField1D(Grid1D g, std::vector<double> s);
    explicit SpectralField1D(Grid1D g);

    std::size_t size() const { return samples.size(); }
    double operator[](std::size_t j) const { return samples[j]; }
    std::vector<Complex> spectrum() const;
    bool finite() const;
};

using Symbol = std::function<Complex(double)>;

/// Applies a Fourier multiplier. At the Nyquist index only the real part is kept.
std::vector<double> apply_symbol(const Grid1D& grid, std::span<const double> x, const Symbol& symbol);
std::vector<double> derivative(const Grid1D& grid, std::span<const double> x, int order = 1);
/// Zeroes every mode above the 2/3 threshold.
std::vector<double> dealias(const Grid1D& grid, std::span<const double> x);
void dealias_in_place(const Grid1D& grid, std::span<double> x);
/// Pointwise product followed by the 2/3 filter.
std::vector<double> product(const Grid1D& grid, std::span<const double> a, std::span<const double> b);
/// Zero-mean antiderivative; the input mean must vanish to within tol.
std::vector<double> antiderivative(const Grid1D& grid, std::span<const double> x, double tol = 1e-10);
double mean(std::span<const double> x);
double max_abs(std::span<const double> x);
/// Discrete L2 norm with the grid spacing as quadrature weight.
double l2_norm(const Grid1D& grid, std::span<const double> x);

/// Row-wise (contiguous blocks of length n1) derivative of a stacked 2D array.
void derivative_rows(const Grid1D& grid, std::span<const double> in, std::span<double> out, int order = 1);
void dealias_rows(const Grid1D& grid, std::span<double> data);

}  // namespace cvs
