#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace cvs {

/// Scalar samples on an n2 x n1 tensor grid, stored row-major (vertical index outer).
struct Field2D {
    int n1 = 0;
    int n2 = 0;
    std::vector<double> data;

    Field2D() = default;
    Field2D(int n1_, int n2_, double value = 0.0) : n1(n1_), n2(n2_), data(static_cast<std::size_t>(n1_) * n2_, value) {}

    double& operator()(int j2, int j1) { return data[static_cast<std::size_t>(j2) * n1 + j1]; }
    double operator()(int j2, int j1) const { return data[static_cast<std::size_t>(j2) * n1 + j1]; }

    std::span<double> row(int j2) { return {data.data() + static_cast<std::size_t>(j2) * n1, static_cast<std::size_t>(n1)}; }
    std::span<const double> row(int j2) const {
        return {data.data() + static_cast<std::size_t>(j2) * n1, static_cast<std::size_t>(n1)};
    }
    std::size_t size() const { return data.size(); }
    bool same_shape(const Field2D& o) const { return n1 == o.n1 && n2 == o.n2; }

    double max_abs() const {
        double m = 0.0;
        for (double v : data) m = std::max(m, std::abs(v));
        return m;
    }
    bool finite() const {
        return std::all_of(data.begin(), data.end(), [](double v) { return std::isfinite(v); });
    }

    Field2D& operator+=(const Field2D& o) {
        check(o);
        for (std::size_t i = 0; i < data.size(); ++i) data[i] += o.data[i];
        return *this;
    }
    Field2D& operator-=(const Field2D& o) {
        check(o);
        for (std::size_t i = 0; i < data.size(); ++i) data[i] -= o.data[i];
        return *this;
    }
    Field2D& operator*=(double a) {
        for (double& v : data) v *= a;
        return *this;
    }
    /// this += a * o
    Field2D& axpy(double a, const Field2D& o) {
        check(o);
        for (std::size_t i = 0; i < data.size(); ++i) data[i] += a * o.data[i];
        return *this;
    }

private:
    void check(const Field2D& o) const {
        if (!same_shape(o)) throw std::invalid_argument("Field2D shape mismatch");
    }
};

inline Field2D operator+(Field2D a, const Field2D& b) { return a += b; }
inline Field2D operator-(Field2D a, const Field2D& b) { return a -= b; }
inline Field2D operator*(double s, Field2D a) { return a *= s; }

/// Pointwise product.
inline Field2D hadamard(const Field2D& a, const Field2D& b) {
    Field2D out(a.n1, a.n2);
    for (std::size_t i = 0; i < a.size(); ++i) out.data[i] = a.data[i] * b.data[i];
    return out;
}

struct Vec2Field {
    Field2D c1;
    Field2D c2;

    Vec2Field() = default;
    Vec2Field(int n1, int n2) : c1(n1, n2), c2(n1, n2) {}
    Vec2Field(Field2D a, Field2D b) : c1(std::move(a)), c2(std::move(b)) {}

    double max_abs() const { return std::max(c1.max_abs(), c2.max_abs()); }
    bool finite() const { return c1.finite() && c2.finite(); }
};

}  // namespace cvs
