#pragma once

#include "cvsheet/evolution.hpp"

#include <array>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace cvs {

/// Flat two-layer configuration with uniform tangential velocity and field in each layer.
struct PlanarParams {
    double u_lower = 0.0;
    double u_upper = 0.0;
    double b_lower = 1.0;
    double b_upper = 1.0;
    double depth_lower = 1.0;
    double depth_upper = 1.0;
    double k = 1.0;

    /// Throws std::invalid_argument for non-positive depths or k = 0.
    void validate() const;
    /// Uniform first components of the Elsasser fields, in the layout used by the simulator.
    Background background() const;
    static PlanarParams from_background(const Background& bg, double k);
};

/// Normal mode exp(i (k x1 - omega t)) with interface amplitude 1.
struct ModeShape {
    Complex interface{1.0, 0.0};
    Complex velocity;  ///< amplitude of d_t f
    Complex pressure;  ///< interface value of the pressure perturbation
};

struct ModeResult {
    std::array<Complex, 2> frequencies;
    double growth_rate = 0.0;  ///< max Im omega
    std::array<ModeShape, 2> modes;
};

/// d_t v = velocity * v + displacement * f for one Fourier mode of the linearized interface equation.
struct ModeOperator {
    Complex velocity;
    Complex displacement;
};

/// Linearized interface equation at wavenumber k, with the pressure closed by the flat
/// Dirichlet-Neumann symbols |k| tanh(|k| depth) of the two layers.
ModeOperator mode_operator(const PlanarParams& params);

/// Roots of the per-mode companion matrix.
ModeResult dispersion_roots(const PlanarParams& params);

enum class SweepField { jump, field, field_lower, field_upper };

/// Applies value to the swept entry (jump keeps the mean velocity of the layers).
PlanarParams with_value(PlanarParams params, SweepField field, double value);

/// Bisection for the value where growth_rate changes sign between lo and hi.
/// Throws std::domain_error when the bracket holds no sign change.
double neutral_threshold(const PlanarParams& base, SweepField field, double lo, double hi, double tolerance = 1e-12);

struct SweepRow {
    double k = 0.0;
    double value = 0.0;
    ModeResult result;
};

std::vector<SweepRow> dispersion_sweep(const PlanarParams& base, SweepField field, std::span<const double> values,
                                       std::span<const double> wavenumbers);

std::string sweep_field_name(SweepField field);
void write_sweep_csv(std::ostream& os, SweepField field, std::span<const SweepRow> rows);

struct MatrixFreeReport {
    double deviation = 0.0;  ///< relative L2 distance between simulated and linear d_t v over all modes
    Complex simulated;       ///< seeded-mode coefficient of the simulated d_t v
    Complex linear;
};

/// Seeds f = eps cos(k x1), v = eps sin(k x1) at Fourier index `mode` on top of the background, evaluates the
/// simulator right-hand side and compares its d_t v with the linear operator applied to the seed.
MatrixFreeReport matrix_free_check(const Background& background, const Grid1D& grid, int mode, double eps,
                                   const ModelConfig& model);

}  // namespace cvs
