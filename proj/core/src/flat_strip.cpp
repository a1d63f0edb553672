#include "cvsheet/flat_strip.hpp"

#include <bit>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace cvs {

namespace {

using Lu = Eigen::PartialPivLU<Eigen::MatrixXd>;

// Transforms `rows` stacked rows of rhs, solves each mode with its factorization and transforms back.
// At mode 0 an optional trailing scalar rides along in both vectors.
void solve_by_mode(const Grid1D& grid, int rows, bool bordered, const std::vector<Lu>& lu,
                   std::span<const double> rhs, std::span<double> out) {
    const int n1 = grid.n();
    const int modes = grid.modes();
    const std::size_t block = static_cast<std::size_t>(rows) * n1;
    if (rhs.size() != block + (bordered ? 1 : 0) || out.size() != rhs.size())
        throw std::invalid_argument("flat solve: vector size mismatch");
    Fourier fft(n1);
    std::vector<Complex> coef(static_cast<std::size_t>(rows) * modes);
    for (int r = 0; r < rows; ++r)
        fft.forward(rhs.subspan(static_cast<std::size_t>(r) * n1, n1),
                    std::span<Complex>(coef.data() + static_cast<std::size_t>(r) * modes, modes));

    for (int m = 0; m < modes; ++m) {
        const bool extra = bordered && m == 0;
        const int size = rows + (extra ? 1 : 0);
        Eigen::MatrixXd b(size, 2);
        for (int r = 0; r < rows; ++r) {
            const Complex c = coef[static_cast<std::size_t>(r) * modes + m];
            b(r, 0) = c.real();
            b(r, 1) = c.imag();
        }
        if (extra) {
            b(rows, 0) = rhs[block];
            b(rows, 1) = 0.0;
        }
        const Eigen::MatrixXd x = lu[m].solve(b);
        for (int r = 0; r < rows; ++r) coef[static_cast<std::size_t>(r) * modes + m] = Complex(x(r, 0), x(r, 1));
        if (extra) out[block] = x(rows, 0);
    }
    // The imaginary part of the zero and Nyquist modes is discarded by c2r; clear it for determinism.
    for (int r = 0; r < rows; ++r) {
        auto* c = coef.data() + static_cast<std::size_t>(r) * modes;
        c[0] = c[0].real();
        c[modes - 1] = c[modes - 1].real();
        fft.backward(std::span<const Complex>(c, modes), out.subspan(static_cast<std::size_t>(r) * n1, n1));
    }
}

template <class Key, class Value, class Make>
std::shared_ptr<const Value> cached(const Key& key, Make make) {
    static std::mutex mutex;
    static std::map<Key, std::shared_ptr<const Value>> cache;
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    if (cache.size() >= 32) cache.clear();
    auto value = make();
    cache.emplace(key, value);
    return value;
}

}  // namespace

FlatLayerSolver::FlatLayerSolver(const Grid1D& grid, int n2, double thickness, BcKind at_zero, BcKind at_one,
                                 bool gauge)
    : grid_(grid), n2_(n2), gauge_(gauge) {
    if (!(thickness > 0.0)) throw std::invalid_argument("flat layer thickness must be positive");
    if (!gauge && at_zero == BcKind::neumann && at_one == BcKind::neumann)
        throw std::invalid_argument("pure Neumann layer needs a gauge constraint");
    const ChebyshevGrid cheb(n2);
    const double h = thickness;
    lu_.reserve(grid.modes());
    for (int m = 0; m < grid.modes(); ++m) {
        const double k = grid.wavenumber(m);
        const bool extra = gauge && m == 0;
        const int size = n2 + (extra ? 1 : 0);
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(size, size);
        a.topLeftCorner(n2, n2) = cheb.d2();
        for (int i = 1; i < n2 - 1; ++i) {
            a(i, i) -= h * h * k * k;
            if (extra) a(i, n2) = 1.0;
        }
        auto boundary = [&](int row, BcKind kind) {
            a.row(row).setZero();
            if (kind == BcKind::dirichlet)
                a(row, row) = 1.0;
            else
                a.row(row).head(n2) = cheb.d1().row(row) / h;
        };
        boundary(0, at_zero);
        boundary(n2 - 1, at_one);
        if (extra)
            for (int j = 0; j < n2; ++j) a(n2, j) = cheb.weights()[j] * h;
        lu_.emplace_back(a);
    }
}

std::size_t FlatLayerSolver::size() const {
    return static_cast<std::size_t>(n2_) * grid_.n() + (gauge_ ? 1 : 0);
}

void FlatLayerSolver::solve(std::span<const double> rhs, std::span<double> out) const {
    solve_by_mode(grid_, n2_, gauge_, lu_, rhs, out);
}

std::shared_ptr<const FlatLayerSolver> FlatLayerSolver::shared(const Grid1D& grid, int n2, double thickness,
                                                               BcKind at_zero, BcKind at_one, bool gauge) {
    using Key = std::tuple<int, std::uint64_t, int, std::uint64_t, int, int, bool>;
    const Key key{grid.n(), std::bit_cast<std::uint64_t>(grid.length()), n2, std::bit_cast<std::uint64_t>(thickness),
                  static_cast<int>(at_zero), static_cast<int>(at_one), gauge};
    return cached<Key, FlatLayerSolver>(
        key, [&] { return std::make_shared<const FlatLayerSolver>(grid, n2, thickness, at_zero, at_one, gauge); });
}

FlatPairSolver::FlatPairSolver(const Grid1D& grid, int n2, double lower_thickness, double upper_thickness)
    : grid_(grid), n2_(n2) {
    if (!(lower_thickness > 0.0) || !(upper_thickness > 0.0))
        throw std::invalid_argument("flat layer thickness must be positive");
    const ChebyshevGrid cheb(n2);
    const double hl = lower_thickness;
    const double hu = upper_thickness;
    const int n = 2 * n2;
    const Eigen::MatrixXd& d1 = cheb.d1();
    lu_.reserve(grid.modes());
    for (int m = 0; m < grid.modes(); ++m) {
        const double k = grid.wavenumber(m);
        const bool extra = m == 0;
        const int size = n + (extra ? 1 : 0);
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(size, size);
        a.block(0, 0, n2, n2) = cheb.d2();
        a.block(n2, n2, n2, n2) = cheb.d2();
        for (int i = 1; i < n2 - 1; ++i) {
            a(i, i) -= hl * hl * k * k;
            a(n2 + i, n2 + i) -= hu * hu * k * k;
            if (extra) {
                a(i, n) = 1.0;
                a(n2 + i, n) = 1.0;
            }
        }
        a.row(0).setZero();
        a.block(0, 0, 1, n2) = d1.row(0) / hl;
        a.row(n2 - 1).setZero();
        a(n2 - 1, n2 - 1) = 1.0;
        a(n2 - 1, n2) = -1.0;
        a.row(n2).setZero();
        a.block(n2, 0, 1, n2) = d1.row(n2 - 1) / hl;
        a.block(n2, n2, 1, n2) -= d1.row(0) / hu;
        a.row(n - 1).setZero();
        a.block(n - 1, n2, 1, n2) = d1.row(n2 - 1) / hu;
        if (extra)
            for (int j = 0; j < n2; ++j) {
                a(n, j) = cheb.weights()[j] * hl;
                a(n, n2 + j) = cheb.weights()[j] * hu;
            }
        lu_.emplace_back(a);
    }
}

void FlatPairSolver::solve(std::span<const double> rhs, std::span<double> out) const {
    solve_by_mode(grid_, 2 * n2_, true, lu_, rhs, out);
}

std::shared_ptr<const FlatPairSolver> FlatPairSolver::shared(const Grid1D& grid, int n2, double lower_thickness,
                                                             double upper_thickness) {
    using Key = std::tuple<int, std::uint64_t, int, std::uint64_t, std::uint64_t>;
    const Key key{grid.n(), std::bit_cast<std::uint64_t>(grid.length()), n2,
                  std::bit_cast<std::uint64_t>(lower_thickness), std::bit_cast<std::uint64_t>(upper_thickness)};
    return cached<Key, FlatPairSolver>(
        key, [&] { return std::make_shared<const FlatPairSolver>(grid, n2, lower_thickness, upper_thickness); });
}

}  // namespace cvs
