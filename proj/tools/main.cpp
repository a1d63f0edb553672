#include "acceptance.hpp"

#include "cvsheet/diagnostics.hpp"
#include "cvsheet/linstab.hpp"
#include "cvsheet/presets.hpp"
#include "cvsheet/runner.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace {

using namespace cvs;

// Applies section.key=value overrides on top of the canonical dump of c, so the parser still does all
// of the checking.
RunConfig with_overrides(const RunConfig& c, const std::vector<std::string>& sets) {
    std::map<std::string, std::string> pending;
    for (const std::string& s : sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError("override '" + s + "' is not key=value");
        pending[s.substr(0, eq)] = s.substr(eq + 1);
    }
    if (pending.empty()) return c;
    std::istringstream in(dump_config(c));
    std::string out, line, section;
    while (std::getline(in, line)) {
        if (!line.empty() && line.front() == '[') section = line.substr(1, line.find(']') - 1);
        const auto eq = line.find('=');
        if (eq != std::string::npos) {
            std::string key = line.substr(0, eq);
            key.erase(key.find_last_not_of(' ') + 1);
            const std::string full = section.empty() ? key : section + "." + key;
            if (auto it = pending.find(full); it != pending.end()) {
                line = key + " = " + it->second;
                pending.erase(it);
            }
        }
        out += line + '\n';
    }
    if (!pending.empty()) throw ConfigError("unknown key '" + pending.begin()->first + "'");
    return parse_config_text(out);
}

RunConfig load(const std::string& path, const std::string& preset, const std::vector<std::string>& sets) {
    RunConfig c = !path.empty() ? parse_config(path) : preset_config(preset.empty() ? "steady" : preset);
    return with_overrides(c, sets);
}

int cmd_run(const RunConfig& c) {
    const auto dir = output_directory(c);
    const RunResult r = run(c);
    std::printf("%s after %ld steps at t = %.6g\n", r.reason.c_str(), r.steps, r.time);
    if (r.budget)
        std::printf("budget ratio %.6g (cap %.3g), ghost integral %.6g%s\n", r.budget->ratio, c.budget_cap,
                    r.budget->ghost_integral, r.budget->flagged ? ", flagged" : "");
    if (!dir.empty()) std::printf("output in %s\n", dir.string().c_str());
    return r.exit_code;
}

SweepField sweep_field(const std::string& name) {
    for (SweepField f : {SweepField::jump, SweepField::field, SweepField::field_lower, SweepField::field_upper})
        if (sweep_field_name(f) == name) return f;
    throw std::invalid_argument("unknown sweep field '" + name + "'");
}

std::vector<double> linspace(double lo, double hi, int count) {
    std::vector<double> out(std::max(count, 1), lo);
    for (int i = 1; i < count; ++i) out[i] = lo + (hi - lo) * i / (count - 1);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Current-vortex sheet simulator and diagnostics"};
    app.require_subcommand(1);

    std::string config_path, preset;
    std::vector<std::string> sets;
    auto add_config_options = [&](CLI::App* sub) {
        sub->add_option("config", config_path, "configuration file")->check(CLI::ExistingFile);
        sub->add_option("--preset", preset, "start from a preset instead of a file");
        sub->add_option("--set", sets, "override, e.g. --set stepper.horizon=2");
    };

    auto* run_cmd = app.add_subcommand("run", "step a configuration to its horizon");
    add_config_options(run_cmd);

    auto* lin_cmd = app.add_subcommand("linstab", "dispersion sweep of the planar problem as CSV");
    add_config_options(lin_cmd);
    std::string field_name = "jump", csv_path;
    double lo = 0.0, hi = 4.0, depth_lower = 1.0, depth_upper = 1.0;
    int count = 41;
    std::vector<double> wavenumbers{1.0};
    lin_cmd->add_option("--field", field_name, "jump, field, field_lower or field_upper")->capture_default_str();
    lin_cmd->add_option("--from", lo, "first swept value")->capture_default_str();
    lin_cmd->add_option("--to", hi, "last swept value")->capture_default_str();
    lin_cmd->add_option("--count", count, "number of values")->capture_default_str()->check(CLI::PositiveNumber);
    lin_cmd->add_option("--k", wavenumbers, "wavenumbers")->capture_default_str();
    lin_cmd->add_option("--depth-lower", depth_lower)->capture_default_str();
    lin_cmd->add_option("--depth-upper", depth_upper)->capture_default_str();
    lin_cmd->add_option("-o,--output", csv_path, "CSV path (stdout when absent)");

    auto* val_cmd = app.add_subcommand("validate", "run the acceptance checks");
    std::vector<int> only;
    val_cmd->add_option("ids", only, "restrict to these criterion ids");

    auto* energy_cmd = app.add_subcommand("energy", "energy report row for a checkpoint");
    std::string ckpt;
    DiagnosticsConfig diag;
    energy_cmd->add_option("checkpoint", ckpt)->required()->check(CLI::ExistingFile);
    energy_cmd->add_option("--mu", diag.weights.mu)->capture_default_str();
    energy_cmd->add_option("--s", diag.s)->capture_default_str();
    energy_cmd->add_option("--c0", diag.c0)->capture_default_str();

    auto* presets_cmd = app.add_subcommand("presets", "list the built-in scenarios");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) return cmd_run(load(config_path, preset, sets));

        if (*lin_cmd) {
            const RunConfig c = load(config_path, preset, sets);
            const SweepField field = sweep_field(field_name);
            PlanarParams base = PlanarParams::from_background(c.background(), wavenumbers.front());
            base.depth_lower = depth_lower;
            base.depth_upper = depth_upper;
            const auto rows = dispersion_sweep(base, field, linspace(lo, hi, count), wavenumbers);
            if (csv_path.empty()) {
                write_sweep_csv(std::cout, field, rows);
            } else {
                std::ofstream out(csv_path);
                write_sweep_csv(out, field, rows);
                if (!out) throw std::runtime_error("cannot write " + csv_path);
            }
            return 0;
        }

        if (*val_cmd) {
            check::AcceptanceSuite suite;
            int failed = 0, ran = 0;
            for (const auto& c : suite.criteria()) {
                if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
                const auto v = suite.evaluate(c);
                std::printf("%s\n", check::format_verdict(v).c_str());
                std::fflush(stdout);
                ++ran;
                failed += !v.passed;
            }
            std::printf("%d of %d criteria passed\n", ran - failed, ran);
            return failed ? 1 : 0;
        }

        if (*energy_cmd) {
            const Restored r = restore(ckpt);
            std::printf("%s\n%s\n", energy_csv_header().c_str(), energy_csv_row(energy_report(r.state, diag)).c_str());
            return 0;
        }

        if (*presets_cmd) {
            for (const PresetInfo& p : preset_catalog()) std::printf("%-22s %s\n", p.name.c_str(), p.summary.c_str());
            return 0;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "cvsheet: %s\n", e.what());
        return 1;
    }
    return 0;
}
