#pragma once

#include "cvsheet/config.hpp"

#include <string>
#include <vector>

namespace cvs {

struct PresetInfo {
    std::string name;
    std::string summary;
};

const std::vector<PresetInfo>& preset_catalog();
bool is_preset(const std::string& name);
/// Default configuration of a preset. Throws ConfigError for unknown names.
RunConfig preset_config(const std::string& name);

struct InitialData {
    SurfaceState surface;
    VorticityState vort;
    Background background;
};

/// Prognostic data at t = 0 for c.preset with the amplitudes and widths of c.
/// Throws DegenerateMap when the requested interface violates the wall clearance.
InitialData build_initial(const RunConfig& c);

}  // namespace cvs
