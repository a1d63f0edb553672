#include "cvsheet/runner.hpp"

#include "cvsheet/errors.hpp"
#include "cvsheet/presets.hpp"

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>

namespace cvs {

std::filesystem::path output_directory(const RunConfig& c) {
    if (const char* env = std::getenv("CVSHEET_OUTPUT_DIR"); env && *env) return env;
    return c.directory;
}

void write_state_snapshots(const SimState& state, const std::filesystem::path& stem, MapKind map) {
    const std::string kind = map == MapKind::harmonic ? "harmonic" : "vertical-stretch";
    const auto& e = state.elsasser;
    const std::pair<const char*, const Field2D*> fields[] = {
        {"lam_plus1", &e.lam_plus.c1},   {"lam_plus2", &e.lam_plus.c2},   {"lam_minus1", &e.lam_minus.c1},
        {"lam_minus2", &e.lam_minus.c2}, {"hat_plus1", &e.hat_plus.c1},   {"hat_plus2", &e.hat_plus.c2},
        {"hat_minus1", &e.hat_minus.c1}, {"hat_minus2", &e.hat_minus.c2}, {"p", &state.pressure.p},
        {"p_hat", &state.pressure.p_hat},
    };
    for (const auto& [name, field] : fields) {
        auto path = stem;
        path += std::string("_") + name;
        write_snapshot(path, *field, {name, field->n1, field->n2, kind, state.time});
    }
}

namespace {

std::string step_tag(long step) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "step_%07ld", step);
    return buf;
}

}  // namespace

RunResult run(const RunConfig& c, const RunHooks& hooks) {
    RunResult result;
    const std::filesystem::path dir = output_directory(c);
    const bool files = !dir.empty();
    std::ofstream csv;
    DiagnosticsConfig diag;
    diag.weights.mu = c.mu;
    diag.s = c.s;
    diag.c0 = c.c0;
    ModelConfig model = c.model();
    const StepperConfig stepper = c.stepper();

    auto record = [&](const SimState& s) {
        result.reports.push_back(energy_report(s, diag));
        if (csv) csv << energy_csv_row(result.reports.back()) << '\n' << std::flush;
    };

    std::optional<SimState> state;
    try {
        c.validate();
        if (files) {
            std::filesystem::create_directories(dir);
            if (c.snapshot_every > 0) std::filesystem::create_directories(dir / "snapshots");
            if (c.checkpoint_every > 0) std::filesystem::create_directories(dir / "checkpoints");
            std::ofstream(dir / "config.toml") << dump_config(c);
            csv.open(dir / "energy.csv");
            csv << energy_csv_header() << '\n';
        }
        if (!c.file.empty()) {
            Restored r = restore(c.file);
            model = r.model;
            state = std::move(r.state);
        } else {
            InitialData init = build_initial(c);
            state = make_state(std::move(init.surface), std::move(init.vort), init.background, model);
        }
        record(*state);

        while (state->time < c.horizon * (1.0 - 1e-12) && (c.max_steps == 0 || state->step < c.max_steps)) {
            double dt = stepper.dt > 0.0 ? stepper.dt : cfl_dt(*state, stepper.cfl_safety);
            dt = std::min(dt, c.horizon - state->time);
            if (stepper.scheme == Scheme::rk4)
                *state = advance_rk4(*state, dt, model);
            else
                *state = advance_picard(*state, dt, model, stepper);
            if (hooks.on_step) hooks.on_step(*state, dt);
            if (state->step % c.cadence == 0) record(*state);
            if (files && c.snapshot_every > 0 && state->step % c.snapshot_every == 0)
                write_state_snapshots(*state, dir / "snapshots" / step_tag(state->step), model.map);
            if (files && c.checkpoint_every > 0 && state->step % c.checkpoint_every == 0)
                checkpoint(*state, model, dir / "checkpoints" / (step_tag(state->step) + ".ckpt"));
        }
        if (result.reports.empty() || result.reports.back().time != state->time) record(*state);
        result.exit_code = exit_ok;
        result.reason = state->time < c.horizon * (1.0 - 1e-12) ? "step limit reached" : "horizon reached";
    } catch (const BlowUp& e) {
        result.exit_code = exit_blow_up;
        result.reason = std::string("blow-up: ") + e.what();
    } catch (const DegenerateMap& e) {
        result.exit_code = exit_blow_up;
        result.reason = std::string("blow-up: ") + e.what();
    } catch (const std::exception& e) {
        result.exit_code = exit_solver_error;
        result.reason = std::string("error: ") + e.what();
    }

    if (state) {
        result.steps = state->step;
        result.time = state->time;
    }
    if (result.reports.size() >= 2 && result.reports.front().total() > 0.0)
        result.budget = energy_budget(result.reports, c.budget_cap);

    if (files) {
        try {
            if (state && result.exit_code == exit_ok) checkpoint(*state, model, dir / "final.ckpt");
            nlohmann::json j{{"exit_code", result.exit_code},
                             {"reason", result.reason},
                             {"steps", result.steps},
                             {"time", result.time},
                             {"reports", result.reports.size()}};
            if (result.budget)
                j["budget"] = {{"ratio", result.budget->ratio},
                               {"ghost_integral", result.budget->ghost_integral},
                               {"flagged", result.budget->flagged},
                               {"flagged_time", result.budget->flagged_time},
                               {"cap", c.budget_cap}};
            std::ofstream(dir / "summary.json") << j.dump(2) << '\n';
        } catch (const std::exception& e) {
            result.exit_code = exit_solver_error;
            result.reason += std::string("; output failed: ") + e.what();
        }
    }
    if (state) result.final_state = std::move(state);
    return result;
}

}  // namespace cvs
