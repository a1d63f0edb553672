#pragma once

#include "cvsheet/elliptic.hpp"
#include "cvsheet/fields.hpp"
#include "cvsheet/geometry.hpp"
#include "cvsheet/vorticity.hpp"

#include <filesystem>
#include <memory>
#include <vector>

namespace cvs {

/// Uniform first components of the four Elsasser fields far from any disturbance.
struct Background {
    double lower_plus = 0.0;
    double lower_minus = 0.0;
    double upper_plus = 0.0;
    double upper_minus = 0.0;

    double speed(Side side, Family fam) const;
    /// Background of tangential velocity jump `jump` (upper minus lower) and field strength b.
    static Background shear(double jump, double b);
};

/// Discretization and solver settings shared by every step.
struct ModelConfig {
    int n2 = 33;
    MapKind map = MapKind::vertical_stretch;
    double c0 = 0.2;
    double elliptic_tol = 1e-10;  ///< stream-function solves
    double pressure_tol = 1e-9;   ///< relative residual of the two-layer pressure solve
    int elliptic_max_iter = 300;
};

enum class Scheme { rk4, picard };

struct StepperConfig {
    Scheme scheme = Scheme::rk4;
    double dt = 0.0;  ///< 0 selects cfl_dt each step
    double cfl_safety = 0.4;
    double picard_tol = 1e-10;
    int picard_max = 30;
};

/// Prognostic unknowns (f, v, curls) plus the derived Elsasser fields, pressure and geometry.
struct SimState {
    SurfaceState surface;
    VorticityState vort;
    ElsasserState elsasser;
    PressurePair pressure;
    Background background;
    double time = 0.0;
    long step = 0;
    std::shared_ptr<const StripPair> strips;

    const Grid1D& grid() const { return surface.grid(); }
};

/// Assembles a state from prognostic data and refreshes the derived fields.
SimState make_state(SurfaceState surface, VorticityState vort, const Background& background, const ModelConfig& model,
                    double time = 0.0);
/// Rebuilds geometry, reconstructs the Elsasser fields and solves for the pressure.
void refresh(SimState& state, const ModelConfig& model);

double cfl_dt(const SimState& state, double safety);

struct Derivative {
    std::vector<double> df;
    std::vector<double> dv;
    VorticityState dw;
};

/// Time derivatives of (f, v, curls) for a refreshed state. The mean of dv is removed so that
/// the interface encloses a fixed volume.
Derivative rhs_full(const SimState& state, const ModelConfig& model);

SimState advance_rk4(const SimState& state, double dt, const ModelConfig& model);

struct PicardStats {
    int iterations = 0;
    int halvings = 0;
    std::vector<double> increments;
};

/// Trapezoidal step with lagged coefficients iterated to a fixed point.
SimState advance_picard(const SimState& state, double dt, const ModelConfig& model, const StepperConfig& cfg,
                        PicardStats* stats = nullptr);

/// min over x1 of the principal-symbol discriminant of the interface equation, divided by 4.
double hyperbolicity_monitor(const SimState& state);

/// The same quantity from traces, before the min (equals stability_margin / 4).
std::vector<double> hyperbolicity_profile(const TraceBundle& traces);

void checkpoint(const SimState& state, const ModelConfig& model, const std::filesystem::path& path);

struct Restored {
    SimState state;
    ModelConfig model;
};

Restored restore(const std::filesystem::path& path);

}  // namespace cvs
