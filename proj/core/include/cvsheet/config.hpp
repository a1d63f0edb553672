#pragma once

#include "cvsheet/evolution.hpp"

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>

namespace cvs {

/// Schema violation; the message names the line and key.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Everything a run needs. Defaults come from the chosen preset; see README for the key list.
struct RunConfig {
    std::uint64_t seed = 0;

    // [grid]
    int n1 = 128;
    int n2 = 33;
    double length = 64.0;
    MapKind map = MapKind::vertical_stretch;

    // [physics]
    double mu = 0.55;
    double c0 = 0.2;
    double field = 1.0;  ///< tangential field strength b in both layers
    double jump = 0.0;   ///< tangential velocity jump, upper minus lower
    int s = 4;

    // [initial]
    std::string preset = "steady";
    double amplitude = 0.0;
    double width = 4.0;
    int mode = 0;  ///< Fourier index of single-mode seeds
    double noise = 0.0;
    std::string file;  ///< checkpoint to restart from; overrides the preset data

    // [stepper]
    Scheme scheme = Scheme::rk4;
    double safety = 0.4;
    double dt = 0.0;
    double horizon = 1.0;
    long max_steps = 0;  ///< 0 means no step limit
    double picard_tol = 1e-10;
    int picard_max = 30;

    // [output]
    std::string directory = "out";
    int cadence = 1;
    int snapshot_every = 0;
    int checkpoint_every = 0;
    double budget_cap = 4.0;

    bool operator==(const RunConfig&) const = default;

    /// Throws ConfigError naming the offending key.
    void validate() const;
    ModelConfig model() const;
    StepperConfig stepper() const;
    Background background() const;
};

/// Parses the flat `[section]` / `key = value` format. Keys absent from the text keep the defaults of
/// the preset named by `initial.preset`.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config(const std::filesystem::path& path);
/// Canonical form listing every key; parse_config_text(dump_config(c)) == c.
std::string dump_config(const RunConfig& c);

}  // namespace cvs
