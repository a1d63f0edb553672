#include "cvsheet/config.hpp"

#include "cvsheet/presets.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <variant>
#include <vector>

namespace cvs {

namespace {

using Member = std::variant<int RunConfig::*, long RunConfig::*, std::uint64_t RunConfig::*, double RunConfig::*,
                            std::string RunConfig::*, MapKind RunConfig::*, Scheme RunConfig::*>;

struct Key {
    const char* name;  ///< section.key, or bare for top-level keys
    Member member;
};

const std::vector<Key>& schema() {
    static const std::vector<Key> keys = {
        {"seed", &RunConfig::seed},
        {"grid.n1", &RunConfig::n1},
        {"grid.n2", &RunConfig::n2},
        {"grid.length", &RunConfig::length},
        {"grid.map", &RunConfig::map},
        {"physics.mu", &RunConfig::mu},
        {"physics.c0", &RunConfig::c0},
        {"physics.field", &RunConfig::field},
        {"physics.jump", &RunConfig::jump},
        {"physics.s", &RunConfig::s},
        {"initial.preset", &RunConfig::preset},
        {"initial.amplitude", &RunConfig::amplitude},
        {"initial.width", &RunConfig::width},
        {"initial.mode", &RunConfig::mode},
        {"initial.noise", &RunConfig::noise},
        {"initial.file", &RunConfig::file},
        {"stepper.scheme", &RunConfig::scheme},
        {"stepper.safety", &RunConfig::safety},
        {"stepper.dt", &RunConfig::dt},
        {"stepper.horizon", &RunConfig::horizon},
        {"stepper.max_steps", &RunConfig::max_steps},
        {"stepper.picard_tol", &RunConfig::picard_tol},
        {"stepper.picard_max", &RunConfig::picard_max},
        {"output.directory", &RunConfig::directory},
        {"output.cadence", &RunConfig::cadence},
        {"output.snapshot_every", &RunConfig::snapshot_every},
        {"output.checkpoint_every", &RunConfig::checkpoint_every},
        {"output.budget_cap", &RunConfig::budget_cap},
    };
    return keys;
}

const Key* find_key(const std::string& name) {
    for (const Key& k : schema())
        if (name == k.name) return &k;
    return nullptr;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct RawValue {
    std::string text;
    bool quoted = false;
    int line = 0;
};

// Splits off a trailing comment and unquotes string values.
RawValue parse_value(const std::string& raw, int line) {
    const std::string s = trim(raw);
    RawValue v{{}, false, line};
    if (!s.empty() && s.front() == '"') {
        v.quoted = true;
        std::size_t i = 1;
        for (; i < s.size() && s[i] != '"'; ++i) {
            if (s[i] == '\\' && i + 1 < s.size()) ++i;
            v.text += s[i];
        }
        if (i >= s.size()) throw ConfigError("line " + std::to_string(line) + ": unterminated string");
        const std::string rest = trim(s.substr(i + 1));
        if (!rest.empty() && rest.front() != '#')
            throw ConfigError("line " + std::to_string(line) + ": unexpected text after string value");
        return v;
    }
    v.text = trim(s.substr(0, s.find('#')));
    if (v.text.empty()) throw ConfigError("line " + std::to_string(line) + ": missing value");
    return v;
}

template <class T>
T parse_number(const RawValue& v, const std::string& key) {
    T out{};
    const char* first = v.text.data();
    const char* last = first + v.text.size();
    const auto [ptr, ec] = std::from_chars(first, last, out);
    if (v.quoted || ec != std::errc() || ptr != last)
        throw ConfigError("line " + std::to_string(v.line) + ": key '" + key + "' expects a number, got '" + v.text + "'");
    return out;
}

void assign(RunConfig& c, const Key& key, const RawValue& v) {
    const std::string name = key.name;
    auto bad = [&](const std::string& what) {
        return ConfigError("line " + std::to_string(v.line) + ": key '" + name + "' expects " + what + ", got '" +
                           v.text + "'");
    };
    std::visit(
        [&](auto member) {
            using T = std::remove_reference_t<decltype(c.*member)>;
            if constexpr (std::is_same_v<T, std::string>) {
                c.*member = v.text;
            } else if constexpr (std::is_same_v<T, MapKind>) {
                if (v.text == "vertical-stretch")
                    c.*member = MapKind::vertical_stretch;
                else if (v.text == "harmonic")
                    c.*member = MapKind::harmonic;
                else
                    throw bad("vertical-stretch or harmonic");
            } else if constexpr (std::is_same_v<T, Scheme>) {
                if (v.text == "rk4")
                    c.*member = Scheme::rk4;
                else if (v.text == "picard")
                    c.*member = Scheme::picard;
                else
                    throw bad("rk4 or picard");
            } else {
                c.*member = parse_number<T>(v, name);
            }
        },
        key.member);
}

std::string render(const RunConfig& c, const Key& key) {
    return std::visit(
        [&](auto member) -> std::string {
            using T = std::remove_cvref_t<decltype(c.*member)>;
            if constexpr (std::is_same_v<T, std::string>) {
                std::string out = "\"";
                for (char ch : c.*member) {
                    if (ch == '"' || ch == '\\') out += '\\';
                    out += ch;
                }
                return out + "\"";
            } else if constexpr (std::is_same_v<T, MapKind>) {
                return c.*member == MapKind::harmonic ? "harmonic" : "vertical-stretch";
            } else if constexpr (std::is_same_v<T, Scheme>) {
                return c.*member == Scheme::picard ? "picard" : "rk4";
            } else if constexpr (std::is_same_v<T, double>) {
                char buf[40];
                std::snprintf(buf, sizeof buf, "%.17g", c.*member);
                return buf;
            } else {
                return std::to_string(c.*member);
            }
        },
        key.member);
}

void require(bool ok, const std::string& key, const std::string& what) {
    if (!ok) throw ConfigError("key '" + key + "': " + what);
}

}  // namespace

void RunConfig::validate() const {
    require(!(mu <= 0.5 || mu > 0.6) && std::isfinite(mu), "physics.mu",
            "value " + std::to_string(mu) + " outside the admissible weight range (1/2, 3/5]");
    require(n1 >= 8 && (n1 & (n1 - 1)) == 0, "grid.n1", "must be a power of two >= 8");
    require(n2 >= 5 && n2 <= 257, "grid.n2", "must lie in [5, 257]");
    require(length > 0.0 && std::isfinite(length), "grid.length", "must be positive");
    require(c0 > 0.0 && c0 < 0.5, "physics.c0", "must lie in (0, 1/2)");
    require(field >= 0.0 && std::isfinite(field), "physics.field", "must be nonnegative");
    require(std::isfinite(jump), "physics.jump", "must be finite");
    require(s >= 1 && s <= 10, "physics.s", "must lie in [1, 10]");
    require(is_preset(preset), "initial.preset", "unknown preset '" + preset + "'");
    require(std::isfinite(amplitude), "initial.amplitude", "must be finite");
    require(width > 0.0 && std::isfinite(width), "initial.width", "must be positive");
    require(mode >= 0 && mode <= n1 / 3, "initial.mode", "must lie in [0, n1/3]");
    require(noise >= 0.0 && std::isfinite(noise), "initial.noise", "must be nonnegative");
    require(safety > 0.0 && safety <= 1.0, "stepper.safety", "must lie in (0, 1]");
    require(dt >= 0.0 && std::isfinite(dt), "stepper.dt", "must be nonnegative");
    require(horizon > 0.0 && std::isfinite(horizon), "stepper.horizon", "must be positive");
    require(max_steps >= 0, "stepper.max_steps", "must be nonnegative");
    require(picard_tol > 0.0, "stepper.picard_tol", "must be positive");
    require(picard_max >= 1, "stepper.picard_max", "must be at least 1");
    require(cadence >= 1, "output.cadence", "must be at least 1");
    require(snapshot_every >= 0, "output.snapshot_every", "must be nonnegative");
    require(checkpoint_every >= 0, "output.checkpoint_every", "must be nonnegative");
    require(budget_cap > 0.0, "output.budget_cap", "must be positive");
}

ModelConfig RunConfig::model() const {
    ModelConfig m;
    m.n2 = n2;
    m.map = map;
    m.c0 = c0;
    return m;
}

StepperConfig RunConfig::stepper() const {
    StepperConfig s;
    s.scheme = scheme;
    s.dt = dt;
    s.cfl_safety = safety;
    s.picard_tol = picard_tol;
    s.picard_max = picard_max;
    return s;
}

Background RunConfig::background() const { return Background::shear(jump, field); }

RunConfig parse_config_text(const std::string& text) {
    std::map<std::string, RawValue> values;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        if (t.front() == '[') {
            const auto close = t.find(']');
            const std::string rest = close == std::string::npos ? std::string() : trim(t.substr(close + 1));
            if (close == std::string::npos || (!rest.empty() && rest.front() != '#'))
                throw ConfigError("line " + std::to_string(lineno) + ": malformed section header");
            section = trim(t.substr(1, close - 1));
            static const std::set<std::string> sections = {"grid", "physics", "initial", "stepper", "output"};
            if (!sections.count(section))
                throw ConfigError("line " + std::to_string(lineno) + ": unknown section '" + section + "'");
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(t.substr(0, eq));
        const std::string full = section.empty() ? key : section + "." + key;
        if (!find_key(full)) throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + full + "'");
        if (values.count(full)) throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + full + "'");
        values.emplace(full, parse_value(t.substr(eq + 1), lineno));
    }

    RunConfig c;
    if (auto it = values.find("initial.preset"); it != values.end()) {
        if (!is_preset(it->second.text))
            throw ConfigError("line " + std::to_string(it->second.line) + ": unknown preset '" + it->second.text + "'");
        c = preset_config(it->second.text);
    }
    for (const auto& [name, v] : values) assign(c, *find_key(name), v);
    c.validate();
    return c;
}

RunConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

std::string dump_config(const RunConfig& c) {
    std::string out;
    std::string section;
    for (const Key& k : schema()) {
        std::string name = k.name;
        const auto dot = name.find('.');
        if (dot != std::string::npos) {
            const std::string sec = name.substr(0, dot);
            if (sec != section) {
                section = sec;
                out += "\n[" + section + "]\n";
            }
            name = name.substr(dot + 1);
        }
        out += name + " = " + render(c, k) + "\n";
    }
    return out;
}

}  // namespace cvs
