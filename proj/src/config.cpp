#include "fiberq/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

#include "fiberq/errors.hpp"
#include "fiberq/semiclassical.hpp"

namespace fiberq {

std::string to_string(ModelKind m) {
    switch (m) {
        case ModelKind::bs: return "bs";
        case ModelKind::spfwm: return "spfwm";
        case ModelKind::multimode: return "multimode";
        case ModelKind::semiclassical: return "semiclassical";
    }
    return "?";
}

std::string to_string(InitialKind k) {
    switch (k) {
        case InitialKind::vacuum: return "vacuum";
        case InitialKind::fock: return "fock";
        case InitialKind::coherent: return "coherent";
    }
    return "?";
}

std::string to_string(Frame f) { return f == Frame::lab ? "lab" : "rotating"; }

double ScenarioConfig::length_km() const {
    switch (model) {
        case ModelKind::bs: return bs.length_km;
        case ModelKind::spfwm: return spfwm.length_km;
        case ModelKind::multimode:
        case ModelKind::semiclassical: return multimode.length_km;
    }
    return 0.0;
}

namespace {

std::string join_issues(const std::vector<ConfigIssue>& issues) {
    std::ostringstream os;
    os << "invalid configuration:";
    for (const auto& i : issues) {
        os << "\n  ";
        if (i.line > 0) os << "line " << i.line << ": ";
        if (!i.key.empty()) os << i.key << ": ";
        os << i.message;
    }
    return os.str();
}

}  // namespace

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}

namespace {

/// Thrown by value converters; turned into a ConfigIssue by the caller.
struct BadValue {
    std::string message;
};

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& v) {
    if (v.empty()) throw BadValue{"expected a number"};
    errno = 0;
    char* end = nullptr;
    const double d = std::strtod(v.c_str(), &end);
    if (end != v.c_str() + v.size() || errno == ERANGE) throw BadValue{"expected a number, got '" + v + "'"};
    if (!std::isfinite(d)) throw BadValue{"must be finite"};
    return d;
}

std::size_t to_size(const std::string& v) {
    if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos)
        throw BadValue{"expected a non-negative integer, got '" + v + "'"};
    errno = 0;
    const unsigned long long n = std::strtoull(v.c_str(), nullptr, 10);
    if (errno == ERANGE) throw BadValue{"integer out of range"};
    return static_cast<std::size_t>(n);
}

bool to_bool(const std::string& v) {
    if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
    if (v == "false" || v == "no" || v == "off" || v == "0") return false;
    throw BadValue{"expected true or false, got '" + v + "'"};
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    if (trim(v).empty()) return out;
    std::size_t start = 0;
    while (true) {
        const auto comma = v.find(',', start);
        out.push_back(trim(std::string_view(v).substr(start, comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

std::vector<double> to_doubles(const std::string& v) {
    std::vector<double> out;
    for (const auto& s : split_list(v)) out.push_back(to_double(s));
    return out;
}

std::vector<std::size_t> to_sizes(const std::string& v) {
    std::vector<std::size_t> out;
    for (const auto& s : split_list(v)) out.push_back(to_size(s));
    return out;
}

double nonneg(const std::string& v) {
    const double d = to_double(v);
    if (d < 0.0) throw BadValue{"must be >= 0 (got " + v + ")"};
    return d;
}

double positive(const std::string& v) {
    const double d = to_double(v);
    if (!(d > 0.0)) throw BadValue{"must be > 0 (got " + v + ")"};
    return d;
}

std::vector<double> nonneg_list(const std::string& v) {
    auto out = to_doubles(v);
    for (double d : out)
        if (d < 0.0) throw BadValue{"entries must be >= 0"};
    return out;
}

std::string fmt(double d) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", d);
    return buf;
}

template <class T, class F>
std::string fmt_list(const std::vector<T>& v, F f) {
    std::string s;
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (k) s += ", ";
        s += f(v[k]);
    }
    return s;
}

std::string fmt_doubles(const std::vector<double>& v) { return fmt_list(v, fmt); }
std::string fmt_sizes(const std::vector<std::size_t>& v) {
    return fmt_list(v, [](std::size_t n) { return std::to_string(n); });
}

// --- key table ---------------------------------------------------------------

using Setter = std::function<void(ScenarioConfig&, const std::string&)>;

struct KeyDef {
    std::string name;
    Setter set;
    int priority = 1;  ///< shorthand keys (0) are applied before specific ones
};

const std::vector<KeyDef>& key_table() {
    static const std::vector<KeyDef> table = [] {
        std::vector<KeyDef> t;
        auto add = [&](std::string name, Setter s, int priority = 1) {
            t.push_back({std::move(name), std::move(s), priority});
        };

        add("model", [](ScenarioConfig& c, const std::string& v) {
            if (v == "bs") c.model = ModelKind::bs;
            else if (v == "spfwm") c.model = ModelKind::spfwm;
            else if (v == "multimode") c.model = ModelKind::multimode;
            else if (v == "semiclassical") c.model = ModelKind::semiclassical;
            else throw BadValue{"expected bs, spfwm, multimode or semiclassical, got '" + v + "'"};
        });
        add("frame", [](ScenarioConfig& c, const std::string& v) {
            if (v == "lab") c.frame = Frame::lab;
            else if (v == "rotating") c.frame = Frame::rotating;
            else throw BadValue{"expected lab or rotating, got '" + v + "'"};
        });

        // bs
        add("bs.gamma", [](ScenarioConfig& c, const std::string& v) { c.bs.gamma = nonneg(v); });
        add("bs.power", [](ScenarioConfig& c, const std::string& v) { c.bs.power = nonneg(v); });
        add("bs.length_km", [](ScenarioConfig& c, const std::string& v) { c.bs.length_km = nonneg(v); });
        add("bs.alpha", [](ScenarioConfig& c, const std::string& v) {
            c.bs.alpha_s = c.bs.alpha_i = nonneg(v);
        }, 0);
        add("bs.rr", [](ScenarioConfig& c, const std::string& v) {
            c.bs.rr_sep = c.bs.rr_shift = c.bs.rr_shift_minus_sep = c.bs.rr_shift_plus_sep = to_double(v);
        }, 0);
        add("bs.ri", [](ScenarioConfig& c, const std::string& v) {
            c.bs.ri_shift = c.bs.ri_shift_minus_sep = c.bs.ri_shift_plus_sep = nonneg(v);
        }, 0);
        add("bs.alpha_s", [](ScenarioConfig& c, const std::string& v) { c.bs.alpha_s = nonneg(v); });
        add("bs.alpha_i", [](ScenarioConfig& c, const std::string& v) { c.bs.alpha_i = nonneg(v); });
        add("bs.rr_sep", [](ScenarioConfig& c, const std::string& v) { c.bs.rr_sep = to_double(v); });
        add("bs.rr_shift", [](ScenarioConfig& c, const std::string& v) { c.bs.rr_shift = to_double(v); });
        add("bs.rr_shift_minus_sep",
            [](ScenarioConfig& c, const std::string& v) { c.bs.rr_shift_minus_sep = to_double(v); });
        add("bs.rr_shift_plus_sep",
            [](ScenarioConfig& c, const std::string& v) { c.bs.rr_shift_plus_sep = to_double(v); });
        add("bs.ri_shift", [](ScenarioConfig& c, const std::string& v) { c.bs.ri_shift = nonneg(v); });
        add("bs.ri_shift_minus_sep",
            [](ScenarioConfig& c, const std::string& v) { c.bs.ri_shift_minus_sep = nonneg(v); });
        add("bs.ri_shift_plus_sep",
            [](ScenarioConfig& c, const std::string& v) { c.bs.ri_shift_plus_sep = nonneg(v); });
        add("bs.beta_s", [](ScenarioConfig& c, const std::string& v) { c.bs.beta_s = to_double(v); });
        add("bs.beta_i", [](ScenarioConfig& c, const std::string& v) { c.bs.beta_i = to_double(v); });
        add("bs.beta_p1", [](ScenarioConfig& c, const std::string& v) { c.bs.beta_p1 = to_double(v); });
        add("bs.beta_p2", [](ScenarioConfig& c, const std::string& v) { c.bs.beta_p2 = to_double(v); });
        add("bs.n_max", [](ScenarioConfig& c, const std::string& v) { c.bs.n_max = to_size(v); });

        // spfwm
        add("spfwm.gamma", [](ScenarioConfig& c, const std::string& v) { c.spfwm.gamma = nonneg(v); });
        add("spfwm.power", [](ScenarioConfig& c, const std::string& v) { c.spfwm.power = nonneg(v); });
        add("spfwm.length_km",
            [](ScenarioConfig& c, const std::string& v) { c.spfwm.length_km = nonneg(v); });
        add("spfwm.alpha", [](ScenarioConfig& c, const std::string& v) {
            c.spfwm.alpha_s = c.spfwm.alpha_i = nonneg(v);
        }, 0);
        add("spfwm.alpha_s", [](ScenarioConfig& c, const std::string& v) { c.spfwm.alpha_s = nonneg(v); });
        add("spfwm.alpha_i", [](ScenarioConfig& c, const std::string& v) { c.spfwm.alpha_i = nonneg(v); });
        add("spfwm.rr_omega",
            [](ScenarioConfig& c, const std::string& v) { c.spfwm.rr_omega = to_double(v); });
        add("spfwm.ri_omega", [](ScenarioConfig& c, const std::string& v) { c.spfwm.ri_omega = nonneg(v); });
        add("spfwm.beta_p", [](ScenarioConfig& c, const std::string& v) { c.spfwm.beta_p = to_double(v); });
        add("spfwm.beta_s", [](ScenarioConfig& c, const std::string& v) { c.spfwm.beta_s = to_double(v); });
        add("spfwm.beta_i", [](ScenarioConfig& c, const std::string& v) { c.spfwm.beta_i = to_double(v); });
        add("spfwm.n_max", [](ScenarioConfig& c, const std::string& v) { c.spfwm.n_max = to_size(v); });

        // multimode grid (also used by the semiclassical model)
        add("multimode.mode_freqs",
            [](ScenarioConfig& c, const std::string& v) { c.multimode.mode_freqs = to_doubles(v); });
        add("multimode.delta_w",
            [](ScenarioConfig& c, const std::string& v) { c.multimode.delta_w = positive(v); });
        add("multimode.gamma", [](ScenarioConfig& c, const std::string& v) { c.multimode.gamma = nonneg(v); });
        add("multimode.length_km",
            [](ScenarioConfig& c, const std::string& v) { c.multimode.length_km = nonneg(v); });
        add("multimode.omega0",
            [](ScenarioConfig& c, const std::string& v) { c.multimode.omega0 = positive(v); });
        add("multimode.hbar", [](ScenarioConfig& c, const std::string& v) { c.multimode.hbar = positive(v); });
        add("multimode.beta", [](ScenarioConfig& c, const std::string& v) { c.multimode.beta = to_doubles(v); });
        add("multimode.alpha",
            [](ScenarioConfig& c, const std::string& v) { c.multimode.alpha = nonneg_list(v); });
        add("multimode.raman_rr",
            [](ScenarioConfig& c, const std::string& v) { c.multimode.raman_rr = to_doubles(v); });
        add("multimode.raman_ri",
            [](ScenarioConfig& c, const std::string& v) { c.multimode.raman_ri = to_doubles(v); });
        add("multimode.n_max", [](ScenarioConfig& c, const std::string& v) { c.multimode.n_max = to_sizes(v); });
        add("multimode.z_eval", [](ScenarioConfig& c, const std::string& v) { c.multimode.z_eval = to_double(v); });
        add("multimode.exact_photon_energy",
            [](ScenarioConfig& c, const std::string& v) { c.multimode.exact_photon_energy = to_bool(v); });
        add("multimode.dim_cap", [](ScenarioConfig& c, const std::string& v) {
            const auto n = to_size(v);
            if (n == 0) throw BadValue{"must be >= 1"};
            c.multimode.dim_cap = n;
        });

        // semiclassical
        add("semiclassical.initial_power",
            [](ScenarioConfig& c, const std::string& v) { c.semiclassical.initial_power = nonneg_list(v); });
        add("semiclassical.initial_phase",
            [](ScenarioConfig& c, const std::string& v) { c.semiclassical.initial_phase = to_doubles(v); });
        add("semiclassical.self_steepening",
            [](ScenarioConfig& c, const std::string& v) { c.semiclassical.self_steepening = to_bool(v); });
        add("semiclassical.sprs_loss",
            [](ScenarioConfig& c, const std::string& v) { c.semiclassical.sprs_loss = to_bool(v); });

        // initial state
        add("initial.state", [](ScenarioConfig& c, const std::string& v) {
            if (v == "vacuum") c.initial.kind = InitialKind::vacuum;
            else if (v == "fock") c.initial.kind = InitialKind::fock;
            else if (v == "coherent") c.initial.kind = InitialKind::coherent;
            else throw BadValue{"expected vacuum, fock or coherent, got '" + v + "'"};
        });
        add("initial.fock", [](ScenarioConfig& c, const std::string& v) { c.initial.fock = to_sizes(v); });
        add("initial.coherent", [](ScenarioConfig& c, const std::string& v) {
            const auto re = to_doubles(v);
            c.initial.coherent.resize(re.size());
            for (std::size_t k = 0; k < re.size(); ++k) c.initial.coherent[k].real(re[k]);
        });
        // Applied after initial.coherent (priority 2) so the lengths can be compared.
        add("initial.coherent_im", [](ScenarioConfig& c, const std::string& v) {
            const auto im = to_doubles(v);
            if (im.size() != c.initial.coherent.size())
                throw BadValue{"needs as many entries as initial.coherent"};
            for (std::size_t k = 0; k < im.size(); ++k) c.initial.coherent[k].imag(im[k]);
        }, 2);

        // integrator
        add("integrator.step_km",
            [](ScenarioConfig& c, const std::string& v) { c.integrator.step_km = positive(v); });
        add("integrator.rehermitize",
            [](ScenarioConfig& c, const std::string& v) { c.integrator.rehermitize = to_bool(v); });
        add("integrator.monitor_every", [](ScenarioConfig& c, const std::string& v) {
            const auto n = to_size(v);
            if (n < 1 || n > 1000000000) throw BadValue{"must be in [1, 1e9]"};
            c.integrator.monitor_every = static_cast<int>(n);
        });
        add("integrator.abort_trace_drift",
            [](ScenarioConfig& c, const std::string& v) { c.integrator.abort_trace_drift = positive(v); });
        add("integrator.abort_min_eig", [](ScenarioConfig& c, const std::string& v) {
            const double d = to_double(v);
            if (d > 0.0) throw BadValue{"must be <= 0"};
            c.integrator.abort_min_eig = d;
        });

        // output
        add("output.dir", [](ScenarioConfig& c, const std::string& v) {
            if (v.empty()) throw BadValue{"must not be empty"};
            c.output.dir = v;
        });
        add("output.samples", [](ScenarioConfig& c, const std::string& v) {
            const auto n = to_size(v);
            if (n < 1) throw BadValue{"must be >= 1"};
            c.output.samples = n;
        });
        return t;
    }();
    return table;
}

const KeyDef* find_key(const std::string& name) {
    for (const auto& k : key_table())
        if (k.name == name) return &k;
    return nullptr;
}

/// multimode.pump.<g>.{power,amplitude,k_p}
struct PumpKey {
    std::size_t index;
    std::string field;
};

std::optional<PumpKey> parse_pump_key(const std::string& key) {
    const std::string prefix = "multimode.pump.";
    if (key.rfind(prefix, 0) != 0) return std::nullopt;
    const auto rest = key.substr(prefix.size());
    const auto dot = rest.find('.');
    if (dot == std::string::npos || dot == 0) return std::nullopt;
    const auto idx = rest.substr(0, dot);
    const auto field = rest.substr(dot + 1);
    if (idx.find_first_not_of("0123456789") != std::string::npos) return std::nullopt;
    if (field != "power" && field != "amplitude" && field != "k_p") return std::nullopt;
    return PumpKey{static_cast<std::size_t>(std::stoull(idx)), field};
}

struct Entry {
    std::string value;
    std::size_t line;  // 0 for overrides
};

}  // namespace

std::vector<std::string> required_keys(ModelKind model) {
    switch (model) {
        case ModelKind::bs: return {"model", "bs.gamma", "bs.power", "bs.length_km"};
        case ModelKind::spfwm: return {"model", "spfwm.gamma", "spfwm.power", "spfwm.length_km"};
        case ModelKind::multimode:
            return {"model", "multimode.mode_freqs", "multimode.delta_w", "multimode.gamma",
                    "multimode.raman_rr", "multimode.length_km"};
        case ModelKind::semiclassical:
            return {"model", "multimode.mode_freqs", "multimode.delta_w", "multimode.gamma",
                    "multimode.raman_rr", "multimode.length_km", "semiclassical.initial_power"};
    }
    return {};
}

ScenarioConfig parse_config(std::string_view text, const ConfigOverrides& overrides) {
    std::vector<ConfigIssue> issues;
    std::map<std::string, Entry> entries;
    std::vector<std::string> order;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const auto raw = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = trim(raw.substr(0, hash));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            issues.push_back({line_no, "", "expected 'key = value'"});
            continue;
        }
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        if (key.empty()) {
            issues.push_back({line_no, "", "missing key before '='"});
            continue;
        }
        if (!find_key(key) && !parse_pump_key(key)) {
            issues.push_back({line_no, key, "unknown key"});
            continue;
        }
        if (auto it = entries.find(key); it != entries.end()) {
            issues.push_back({line_no, key,
                              "duplicate key (first set on line " + std::to_string(it->second.line) + ")"});
            continue;
        }
        entries[key] = {value, line_no};
        order.push_back(key);
    }

    std::optional<std::string> nmax_override;
    for (const auto& [key, value] : overrides) {
        if (key == "n_max") {
            nmax_override = value;
            continue;
        }
        if (!find_key(key) && !parse_pump_key(key)) {
            issues.push_back({0, key, "unknown key (override)"});
            continue;
        }
        if (!entries.count(key)) order.push_back(key);
        entries[key] = {value, 0};
    }

    ScenarioConfig cfg;
    auto apply = [&](const std::string& key, const Entry& e, const Setter& set) {
        try {
            set(cfg, e.value);
        } catch (const BadValue& b) {
            issues.push_back({e.line, key, b.message + (e.line == 0 ? " (override)" : "")});
        }
    };

    // The model decides which keys are required, so it goes first.
    if (auto it = entries.find("model"); it != entries.end()) {
        apply("model", it->second, find_key("model")->set);
    } else {
        std::string all;
        for (auto m : {ModelKind::bs, ModelKind::spfwm, ModelKind::multimode, ModelKind::semiclassical}) {
            all += "\n    " + to_string(m) + ":";
            for (const auto& k : required_keys(m)) all += " " + k;
        }
        issues.push_back({0, "model", "missing required key; required keys per model:" + all});
        throw ConfigError(std::move(issues));
    }

    for (int priority = 0; priority <= 2; ++priority)
        for (const auto& key : order) {
            if (key == "model") continue;
            const KeyDef* def = find_key(key);
            if (!def || def->priority != priority) continue;
            apply(key, entries.at(key), def->set);
        }

    // Pump substitutions.
    std::map<std::size_t, std::map<std::string, Entry>> pump_fields;
    for (const auto& key : order)
        if (auto pk = parse_pump_key(key)) pump_fields[pk->index][pk->field] = entries.at(key);
    for (const auto& [idx, fields] : pump_fields) {
        const std::string base = "multimode.pump." + std::to_string(idx);
        PumpSubstitution p;
        const bool has_power = fields.count("power") > 0;
        const bool has_amp = fields.count("amplitude") > 0;
        if (has_power && has_amp) {
            issues.push_back({fields.at("amplitude").line, base + ".amplitude",
                              "give either power or amplitude, not both"});
            continue;
        }
        if (!has_power && !has_amp) {
            issues.push_back({fields.begin()->second.line, base + ".power", "missing pump power or amplitude"});
            continue;
        }
        try {
            if (has_amp) {
                p.amplitude = nonneg(fields.at("amplitude").value);
            } else {
                const double pw = nonneg(fields.at("power").value);
                p.amplitude = pump_amplitude(pw, cfg.multimode.delta_w);
            }
            if (fields.count("k_p")) p.k_p = to_double(fields.at("k_p").value);
            cfg.multimode.pumps[idx] = p;
        } catch (const BadValue& b) {
            issues.push_back({fields.begin()->second.line, base, b.message});
        }
    }

    // Bare n_max override.
    if (nmax_override) {
        try {
            const auto n = to_size(*nmax_override);
            switch (cfg.model) {
                case ModelKind::bs: cfg.bs.n_max = n; break;
                case ModelKind::spfwm: cfg.spfwm.n_max = n; break;
                case ModelKind::multimode:
                case ModelKind::semiclassical:
                    cfg.multimode.n_max.assign(cfg.multimode.mode_freqs.size(), n);
                    break;
            }
        } catch (const BadValue& b) {
            issues.push_back({0, "n_max", b.message + " (override)"});
        }
    }

    for (const auto& key : required_keys(cfg.model))
        if (!entries.count(key)) issues.push_back({0, key, "missing required key for model " + to_string(cfg.model)});

    const std::size_t line_of_model = entries.at("model").line;
    auto line_of = [&](const std::string& key) -> std::size_t {
        auto it = entries.find(key);
        return it == entries.end() ? line_of_model : it->second.line;
    };

    // Multimode defaults and shape checks.
    const bool grid_model = cfg.model == ModelKind::multimode || cfg.model == ModelKind::semiclassical;
    if (grid_model && issues.empty()) {
        auto& g = cfg.multimode;
        const std::size_t m = g.mode_freqs.size();
        if (g.beta.empty()) g.beta.assign(m, 0.0);
        if (g.alpha.empty()) g.alpha.assign(m, 0.0);
        if (g.raman_ri.empty() && m > 0) g.raman_ri.assign(2 * m - 1, 0.0);
        if (g.n_max.empty()) g.n_max.assign(m, 1);
        else if (g.n_max.size() == 1 && m > 1) g.n_max.assign(m, g.n_max.front());
    }

    if (issues.empty()) {
        try {
            switch (cfg.model) {
                case ModelKind::bs: cfg.bs.validate(); break;
                case ModelKind::spfwm: cfg.spfwm.validate(); break;
                case ModelKind::multimode: cfg.multimode.validate(); break;
                case ModelKind::semiclassical: validate_mean_field_grid(cfg.multimode); break;
            }
        } catch (const std::exception& e) {
            issues.push_back({line_of_model, to_string(cfg.model), e.what()});
        }
    }

    if (issues.empty() && cfg.model == ModelKind::semiclassical) {
        const std::size_t m = cfg.multimode.mode_count();
        auto& s = cfg.semiclassical;
        if (s.initial_phase.empty()) s.initial_phase.assign(m, 0.0);
        if (s.initial_power.size() != m)
            issues.push_back({line_of("semiclassical.initial_power"), "semiclassical.initial_power",
                              "needs one value per grid mode (" + std::to_string(m) + ")"});
        if (s.initial_phase.size() != m)
            issues.push_back({line_of("semiclassical.initial_phase"), "semiclassical.initial_phase",
                              "needs one value per grid mode (" + std::to_string(m) + ")"});
        if (!cfg.multimode.pumps.empty())
            issues.push_back({line_of_model, "multimode.pump",
                              "pump substitutions do not apply to the semiclassical model"});
    }

    // Initial state against the quantum modes.
    if (issues.empty() && cfg.model != ModelKind::semiclassical) {
        std::vector<std::size_t> nmax;
        switch (cfg.model) {
            case ModelKind::bs: nmax = {cfg.bs.n_max, cfg.bs.n_max}; break;
            case ModelKind::spfwm: nmax = {cfg.spfwm.n_max, cfg.spfwm.n_max}; break;
            default:
                for (std::size_t g = 0; g < cfg.multimode.mode_count(); ++g)
                    if (!cfg.multimode.pumps.count(g)) nmax.push_back(cfg.multimode.n_max[g]);
        }
        const auto& ini = cfg.initial;
        const auto st = line_of("initial.state");
        if (ini.kind != InitialKind::fock && entries.count("initial.fock"))
            issues.push_back({line_of("initial.fock"), "initial.fock", "only valid with initial.state = fock"});
        if (ini.kind != InitialKind::coherent && entries.count("initial.coherent"))
            issues.push_back(
                {line_of("initial.coherent"), "initial.coherent", "only valid with initial.state = coherent"});
        if (ini.kind == InitialKind::fock) {
            if (ini.fock.size() != nmax.size()) {
                issues.push_back({entries.count("initial.fock") ? line_of("initial.fock") : st, "initial.fock",
                                  "needs one occupation per quantum mode (" + std::to_string(nmax.size()) + ")"});
            } else {
                for (std::size_t k = 0; k < nmax.size(); ++k)
                    if (ini.fock[k] > nmax[k])
                        issues.push_back({line_of("initial.fock"), "initial.fock",
                                          "occupation " + std::to_string(ini.fock[k]) + " of mode " +
                                              std::to_string(k) + " exceeds n_max " + std::to_string(nmax[k])});
            }
        }
        if (ini.kind == InitialKind::coherent && ini.coherent.size() != nmax.size())
            issues.push_back({entries.count("initial.coherent") ? line_of("initial.coherent") : st,
                              "initial.coherent",
                              "needs one amplitude per quantum mode (" + std::to_string(nmax.size()) + ")"});
    }

    if (!issues.empty()) throw ConfigError(std::move(issues));
    return cfg;
}

std::string render_config(const ScenarioConfig& c) {
    std::ostringstream os;
    auto kv = [&](const std::string& k, const std::string& v) { os << k << " = " << v << "\n"; };
    kv("model", to_string(c.model));
    if (c.model != ModelKind::semiclassical) kv("frame", to_string(c.frame));

    switch (c.model) {
        case ModelKind::bs: {
            const auto& p = c.bs;
            kv("bs.gamma", fmt(p.gamma));
            kv("bs.power", fmt(p.power));
            kv("bs.length_km", fmt(p.length_km));
            kv("bs.alpha_s", fmt(p.alpha_s));
            kv("bs.alpha_i", fmt(p.alpha_i));
            kv("bs.rr_sep", fmt(p.rr_sep));
            kv("bs.rr_shift", fmt(p.rr_shift));
            kv("bs.rr_shift_minus_sep", fmt(p.rr_shift_minus_sep));
            kv("bs.rr_shift_plus_sep", fmt(p.rr_shift_plus_sep));
            kv("bs.ri_shift", fmt(p.ri_shift));
            kv("bs.ri_shift_minus_sep", fmt(p.ri_shift_minus_sep));
            kv("bs.ri_shift_plus_sep", fmt(p.ri_shift_plus_sep));
            kv("bs.beta_s", fmt(p.beta_s));
            kv("bs.beta_i", fmt(p.beta_i));
            kv("bs.beta_p1", fmt(p.beta_p1));
            kv("bs.beta_p2", fmt(p.beta_p2));
            kv("bs.n_max", std::to_string(p.n_max));
            break;
        }
        case ModelKind::spfwm: {
            const auto& p = c.spfwm;
            kv("spfwm.gamma", fmt(p.gamma));
            kv("spfwm.power", fmt(p.power));
            kv("spfwm.length_km", fmt(p.length_km));
            kv("spfwm.alpha_s", fmt(p.alpha_s));
            kv("spfwm.alpha_i", fmt(p.alpha_i));
            kv("spfwm.rr_omega", fmt(p.rr_omega));
            kv("spfwm.ri_omega", fmt(p.ri_omega));
            kv("spfwm.beta_p", fmt(p.beta_p));
            kv("spfwm.beta_s", fmt(p.beta_s));
            kv("spfwm.beta_i", fmt(p.beta_i));
            kv("spfwm.n_max", std::to_string(p.n_max));
            break;
        }
        case ModelKind::multimode:
        case ModelKind::semiclassical: {
            const auto& g = c.multimode;
            kv("multimode.mode_freqs", fmt_doubles(g.mode_freqs));
            kv("multimode.delta_w", fmt(g.delta_w));
            kv("multimode.gamma", fmt(g.gamma));
            kv("multimode.length_km", fmt(g.length_km));
            kv("multimode.omega0", fmt(g.omega0));
            kv("multimode.hbar", fmt(g.hbar));
            kv("multimode.beta", fmt_doubles(g.beta));
            kv("multimode.alpha", fmt_doubles(g.alpha));
            kv("multimode.raman_rr", fmt_doubles(g.raman_rr));
            kv("multimode.raman_ri", fmt_doubles(g.raman_ri));
            kv("multimode.n_max", fmt_sizes(g.n_max));
            kv("multimode.z_eval", fmt(g.z_eval));
            kv("multimode.exact_photon_energy", g.exact_photon_energy ? "true" : "false");
            kv("multimode.dim_cap", std::to_string(g.dim_cap));
            for (const auto& [idx, p] : g.pumps) {
                const std::string base = "multimode.pump." + std::to_string(idx);
                kv(base + ".amplitude", fmt(p.amplitude));
                kv(base + ".k_p", fmt(p.k_p));
            }
            break;
        }
    }

    if (c.model == ModelKind::semiclassical) {
        const auto& s = c.semiclassical;
        kv("semiclassical.initial_power", fmt_doubles(s.initial_power));
        kv("semiclassical.initial_phase", fmt_doubles(s.initial_phase));
        kv("semiclassical.self_steepening", s.self_steepening ? "true" : "false");
        kv("semiclassical.sprs_loss", s.sprs_loss ? "true" : "false");
    } else {
        kv("initial.state", to_string(c.initial.kind));
        if (c.initial.kind == InitialKind::fock) kv("initial.fock", fmt_sizes(c.initial.fock));
        if (c.initial.kind == InitialKind::coherent) {
            std::vector<double> re, im;
            for (const auto& a : c.initial.coherent) {
                re.push_back(a.real());
                im.push_back(a.imag());
            }
            kv("initial.coherent", fmt_doubles(re));
            kv("initial.coherent_im", fmt_doubles(im));
        }
    }

    kv("integrator.step_km", fmt(c.integrator.step_km));
    kv("integrator.rehermitize", c.integrator.rehermitize ? "true" : "false");
    kv("integrator.monitor_every", std::to_string(c.integrator.monitor_every));
    kv("integrator.abort_trace_drift", fmt(c.integrator.abort_trace_drift));
    kv("integrator.abort_min_eig", fmt(c.integrator.abort_min_eig));
    kv("output.dir", c.output.dir);
    kv("output.samples", std::to_string(c.output.samples));
    return os.str();
}

}  // namespace fiberq
