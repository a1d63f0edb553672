#pragma once

#include "cvsheet/config.hpp"
#include "cvsheet/diagnostics.hpp"

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace cvs {

enum ExitCode : int { exit_ok = 0, exit_solver_error = 1, exit_blow_up = 2 };

struct RunHooks {
    /// Called after every accepted step with the step size just taken.
    std::function<void(const SimState&, double dt)> on_step;
};

struct RunResult {
    int exit_code = exit_ok;
    std::string reason;
    std::vector<EnergyReport> reports;
    std::optional<BudgetResult> budget;  ///< absent when E(0) = 0
    std::optional<SimState> final_state;
    long steps = 0;
    double time = 0.0;
};

/// Output directory after the CVSHEET_OUTPUT_DIR override; empty disables file output.
std::filesystem::path output_directory(const RunConfig& c);

/// Steps the configured problem to its horizon, writing energy.csv, snapshots, checkpoints and
/// summary.json under output_directory(c). Never throws for numerical failures; they map to exit codes.
RunResult run(const RunConfig& c, const RunHooks& hooks = {});

/// Writes the fields of a state as snapshot pairs stem_<name>.bin / .json.
void write_state_snapshots(const SimState& state, const std::filesystem::path& stem, MapKind map);

}  // namespace cvs
