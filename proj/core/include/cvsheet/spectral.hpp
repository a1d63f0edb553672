#pragma once

#include "cvsheet/grid.hpp"

#include <cmath>
#include <memory>
#include <vector>

namespace cvs {

/// <a> = sqrt(1 + a^2)
inline double bracket(double a) { return std::sqrt(1.0 + a * a); }

enum class Family { plus, minus };

inline int sign_of(Family f) { return f == Family::plus ? 1 : -1; }
inline Family opposite(Family f) { return f == Family::plus ? Family::minus : Family::plus; }

/// <d1>^s g through the multiplier (1 + xi^2)^{s/2}.
SpectralField1D fractional_derivative(const SpectralField1D& g, double s);

/// exp(-depth |d1|) phi.
SpectralField1D poisson_extension(const SpectralField1D& phi, double depth);

struct WeightSpec {
    double mu = 0.55;
    double t = 0.0;
    double window = 0.0;  ///< half-width where weights are trusted; 0 means L/2

    void validate() const;
};

/// <x1 +- t>^power at the grid points.
std::vector<double> weight_samples(const Grid1D& grid, const WeightSpec& spec, Family sign, double power);

struct SupportReport {
    double edge_fraction = 0.0;     ///< share of sum |g|^2 within 5% of the window edge
    double outside_fraction = 0.0;  ///< share outside [-window, window]
    bool flagged = false;
};

SupportReport support_monitor(const Grid1D& grid, std::span<const double> g, double window = 0.0);

/// Antiderivative q(theta) = int_0^theta <tau>^{-2 mu} dtau, tabulated once per mu.
class GhostTable {
public:
    explicit GhostTable(double mu);

    double mu() const { return mu_; }
    double operator()(double theta) const;
    /// int_0^inf <tau>^{-2 mu} dtau
    double limit() const { return q_inf_; }

private:
    double tail(double theta) const;

    double mu_;
    double q_inf_;
    std::vector<double> nodes_;
    std::vector<double> values_;
};

/// Shared table for a given mu (built on first use).
std::shared_ptr<const GhostTable> ghost_table(double mu);

/// exp(q(w-)) for the plus family, exp(q(-w+)) for the minus family.
std::vector<double> ghost_factor(const Grid1D& grid, const WeightSpec& spec, Family sign);

/// M = int_R <z>^{-2 mu} dz.
double mass_constant(const WeightSpec& spec);
double mass_constant(double mu);

/// |[<d1>^s, <w>^power] g| / |<w>^power g| in discrete L2.
double commutator_ratio(const SpectralField1D& g, double s, const WeightSpec& spec, Family sign, double power);

}  // namespace cvs
