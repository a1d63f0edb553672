#pragma once

#include "cvsheet/evolution.hpp"
#include "cvsheet/spectral.hpp"
#include "cvsheet/surface.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace cvs {

/// Highest spatial derivative order any discrete energy evaluates.
inline constexpr int energy_order_cap = 3;

/// A weighted energy together with its ghost counterpart (same integrand divided by <w-+>^{2 mu}).
struct EnergyPair {
    double energy = 0.0;
    double ghost = 0.0;
};

/// Sum over both families and layers of |<w+->^power d^alpha (Lambda - U e1)|^2 for |alpha| <= max_order,
/// where U is the background speed of that field. Weights are evaluated at spec.t.
/// Throws std::invalid_argument when max_order is negative or exceeds energy_order_cap.
EnergyPair bulk_energies(const SimState& state, const WeightSpec& spec, int max_order, double power);
double bulk_energy(const SimState& state, const WeightSpec& spec, int max_order, double power);
double ghost_bulk_energy(const SimState& state, const WeightSpec& spec, int max_order, double power);

/// Sum over signs and a <= s-1 of |<w+->^{2 mu} <d1>^{1/2} d1^a (v +- f')|^2 on the line.
EnergyPair surface_energies(const SurfaceState& surface, const WeightSpec& spec, int s);
double surface_energy(const SurfaceState& surface, const WeightSpec& spec, int s);
double ghost_surface_energy(const SurfaceState& surface, const WeightSpec& spec, int s);

/// Weighted curls: sum over |alpha| <= max_order of |<w+->^power d^alpha curl Lambda|^2.
EnergyPair vorticity_energies(const SimState& state, const WeightSpec& spec, int max_order, double power);

/// Powers m <= max_order of the tangential field d1 + Psi d2 applied to Lambda - U e1.
EnergyPair tangential_energies(const SimState& state, const WeightSpec& spec, int max_order, double power,
                               double c0 = 0.2);

struct DiagnosticsConfig {
    WeightSpec weights;  ///< weights.t is replaced by the state time
    int s = 4;
    double c0 = 0.2;
};

struct EnergyReport {
    double time = 0.0;
    double e_bulk_low = 0.0;     ///< weight 5 mu, orders <= 3
    double e_bulk_high = 0.0;    ///< weight 2 mu, orders <= min(s, cap)
    double e_surface = 0.0;      ///< free-surface energy of order s + 1/2, capped
    double e_ghost = 0.0;        ///< bulk and surface ghost energies together
    double e_vorticity = 0.0;    ///< weight 2 mu curls, orders <= min(s, cap) - 1
    double e_tangential = 0.0;   ///< weight 5 mu tangential powers <= 3
    double stability_min = 0.0;  ///< min over x1 of 2(b_l^2 + b_u^2) - (u_l - u_u)^2
    double amplitude = 0.0;      ///< |f|_inf
    int order_cap = energy_order_cap;

    /// The capped total E = E^b + E^f entering the budget.
    double total() const { return e_bulk_low + e_bulk_high + e_surface; }
};

EnergyReport energy_report(const SimState& state, const DiagnosticsConfig& cfg);

struct BudgetResult {
    double ratio = 0.0;           ///< sup_t [E(t) + int_0^t G] / E(0)
    double ghost_integral = 0.0;  ///< int G over the whole series
    bool flagged = false;         ///< running quantity exceeded cap * E(0), or went non-finite
    double flagged_time = 0.0;
};

/// Trapezoidal time integral of the ghost energy on the report times. Throws std::invalid_argument for
/// fewer than two samples and std::domain_error when E(0) vanishes.
BudgetResult energy_budget(std::span<const EnergyReport> series, double cap = 4.0);

/// Sup norms entering the characteristic amplitude bound: |f|, |f'| and |<w+->^{2 mu} (Lambda - U e1)| over
/// both layers, weights at the state time.
AmplitudeSample amplitude_sample(const SimState& state, const WeightSpec& spec);

std::string energy_csv_header();
std::string energy_csv_row(const EnergyReport& r);
void write_energy_csv(std::ostream& os, std::span<const EnergyReport> series);

}  // namespace cvs
