#include "bathlab/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace bathlab {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

bool looks_numeric(const std::string& s) {
    char* end = nullptr;
    std::strtod(s.c_str(), &end);
    return end != s.c_str() && *end == '\0';
}

// numbers are canonicalized through %.17g so the hash is format-stable
std::string canonical_token(const std::string& raw) {
    if (!looks_numeric(raw)) return raw;
    const double v = std::strtod(raw.c_str(), nullptr);
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<std::string> split_array(const std::string& body, const std::string& anchor) {
    std::vector<std::string> out;
    std::string current;
    for (char c : body) {
        if (c == ',') {
            out.push_back(trim(current));
            current.clear();
        } else {
            current += c;
        }
    }
    const std::string last = trim(current);
    if (!last.empty()) out.push_back(last);
    for (const auto& v : out)
        if (v.empty()) throw ConfigError(anchor + ": empty element in inline array");
    return out;
}

constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

} // namespace

KeyValueConfig KeyValueConfig::parse_string(const std::string& text, const std::string& name) {
    KeyValueConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::string section;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string anchor = name + ":" + std::to_string(lineno);
        const std::size_t hash_pos = line.find('#');
        if (hash_pos != std::string::npos) line.erase(hash_pos);
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t.front() == '[') {
            if (t.back() != ']') throw ConfigError(anchor + ": unterminated section header");
            section = trim(t.substr(1, t.size() - 2));
            if (section.empty()) throw ConfigError(anchor + ": empty section name");
            continue;
        }
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(anchor + ": expected 'key = value'");
        if (section.empty())
            throw ConfigError(anchor + ": key outside of any [section]");
        const std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (key.empty()) throw ConfigError(anchor + ": empty key");
        if (value.empty()) throw ConfigError(anchor + ": empty value for key '" + key + "'");
        std::vector<std::string> vals;
        if (value.front() == '[') {
            if (value.back() != ']')
                throw ConfigError(anchor + ": unterminated inline array for key '" + key + "'");
            vals = split_array(value.substr(1, value.size() - 2), anchor);
        } else {
            vals = {value};
        }
        if (cfg.data_[section].count(key))
            throw ConfigError(anchor + ": duplicate key '" + key + "' in [" + section + "]");
        cfg.data_[section][key] = std::move(vals);
    }
    return cfg;
}

KeyValueConfig KeyValueConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_string(ss.str(), path);
}

void KeyValueConfig::apply_override(const std::string& spec) {
    const std::size_t eq = spec.find('=');
    if (eq == std::string::npos)
        throw ConfigError("override '" + spec + "': expected section.key=value");
    const std::string path = trim(spec.substr(0, eq));
    const std::string value = trim(spec.substr(eq + 1));
    const std::size_t dot = path.find('.');
    if (dot == std::string::npos || value.empty())
        throw ConfigError("override '" + spec + "': expected section.key=value");
    const std::string section = path.substr(0, dot);
    const std::string key = path.substr(dot + 1);
    std::vector<std::string> vals;
    if (!value.empty() && value.front() == '[') {
        if (value.back() != ']') throw ConfigError("override '" + spec + "': unterminated array");
        vals = split_array(value.substr(1, value.size() - 2), "override");
    } else {
        vals = {value};
    }
    data_[section][key] = std::move(vals);
}

bool KeyValueConfig::has(const std::string& section, const std::string& key) const {
    auto s = data_.find(section);
    return s != data_.end() && s->second.count(key) > 0;
}

const std::vector<std::string>& KeyValueConfig::values(const std::string& section,
                                                       const std::string& key) const {
    return data_.at(section).at(key);
}

void KeyValueConfig::set(const std::string& section, const std::string& key,
                         const std::vector<std::string>& vals) {
    data_[section][key] = vals;
}

std::string KeyValueConfig::canonical_text() const {
    std::ostringstream os;
    for (const auto& [section, keys] : data_) {
        for (const auto& [key, vals] : keys) {
            os << section << '.' << key << '=';
            if (vals.size() == 1) {
                os << canonical_token(vals[0]);
            } else {
                os << '[';
                for (std::size_t i = 0; i < vals.size(); ++i) {
                    if (i) os << ',';
                    os << canonical_token(vals[i]);
                }
                os << ']';
            }
            os << '\n';
        }
    }
    return os.str();
}

std::uint64_t KeyValueConfig::canonical_hash() const {
    const std::string text = canonical_text();
    std::uint64_t h = kFnvOffset;
    for (unsigned char c : text) {
        h ^= c;
        h *= kFnvPrime;
    }
    return h;
}

std::string KeyValueConfig::canonical_hash_hex() const {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(canonical_hash()));
    return buf;
}

std::string to_string(SolverMethod method) {
    switch (method) {
        case SolverMethod::VolterraFull: return "volterra_full";
        case SolverMethod::Localized: return "localized";
        case SolverMethod::Modes: return "modes";
        case SolverMethod::ModesLaplace: return "modes_laplace";
        case SolverMethod::OhmicDde: return "ohmic_dde";
        case SolverMethod::WeakCoupling: return "weak_coupling";
    }
    return "unknown";
}

SolverMethod solver_method_from_string(const std::string& name) {
    if (name == "volterra_full") return SolverMethod::VolterraFull;
    if (name == "localized") return SolverMethod::Localized;
    if (name == "modes") return SolverMethod::Modes;
    if (name == "modes_laplace") return SolverMethod::ModesLaplace;
    if (name == "ohmic_dde") return SolverMethod::OhmicDde;
    if (name == "weak_coupling") return SolverMethod::WeakCoupling;
    throw ConfigError("unknown solver method: " + name);
}

// ------------------------------ schema ---------------------------------------

namespace {

class Validator {
public:
    explicit Validator(const KeyValueConfig& kv) : kv_(kv) {}

    double number(const std::string& sec, const std::string& key, double fallback) {
        mark(sec, key);
        if (!kv_.has(sec, key)) return fallback;
        return parse_number(sec, key, scalar(sec, key));
    }

    std::uint64_t integer(const std::string& sec, const std::string& key,
                          std::uint64_t fallback) {
        mark(sec, key);
        if (!kv_.has(sec, key)) return fallback;
        const std::string& s = scalar(sec, key);
        try {
            return std::stoull(s);
        } catch (...) {
            errors_ << "  [" << sec << "] " << key << ": not an integer: '" << s << "'\n";
            return fallback;
        }
    }

    bool boolean(const std::string& sec, const std::string& key, bool fallback) {
        mark(sec, key);
        if (!kv_.has(sec, key)) return fallback;
        const std::string& s = scalar(sec, key);
        if (s == "true" || s == "1" || s == "yes") return true;
        if (s == "false" || s == "0" || s == "no") return false;
        errors_ << "  [" << sec << "] " << key << ": not a boolean: '" << s << "'\n";
        return fallback;
    }

    std::string word(const std::string& sec, const std::string& key,
                     const std::string& fallback) {
        mark(sec, key);
        if (!kv_.has(sec, key)) return fallback;
        return scalar(sec, key);
    }

    std::vector<std::string> words(const std::string& sec, const std::string& key,
                                   const std::vector<std::string>& fallback) {
        mark(sec, key);
        if (!kv_.has(sec, key)) return fallback;
        return kv_.values(sec, key);
    }

    void note_error(const std::string& sec, const std::string& key, const std::string& msg) {
        errors_ << "  [" << sec << "] " << key << ": " << msg << "\n";
    }

    // every key present in the raw form must have been consumed by the schema
    void reject_unknown() {
        for (const auto& [section, keys] : kv_.data()) {
            for (const auto& [key, vals] : keys) {
                (void)vals;
                if (!seen_.count(section + "." + key))
                    errors_ << "  [" << section << "] " << key << ": unknown key\n";
            }
        }
    }

    void throw_if_errors() const {
        const std::string msg = errors_.str();
        if (!msg.empty()) throw ConfigError("configuration errors:\n" + msg);
    }

private:
    const KeyValueConfig& kv_;
    std::ostringstream errors_;
    std::map<std::string, int> seen_;

    void mark(const std::string& sec, const std::string& key) { seen_[sec + "." + key] = 1; }

    const std::string& scalar(const std::string& sec, const std::string& key) {
        const auto& vals = kv_.values(sec, key);
        if (vals.size() != 1) {
            static const std::string bad = "<array>";
            errors_ << "  [" << sec << "] " << key << ": expected a scalar\n";
            return bad;
        }
        return vals[0];
    }

    double parse_number(const std::string& sec, const std::string& key, const std::string& s) {
        char* end = nullptr;
        const double v = std::strtod(s.c_str(), &end);
        if (end == s.c_str() || *end != '\0') {
            errors_ << "  [" << sec << "] " << key << ": not a number: '" << s << "'\n";
            return 0.0;
        }
        return v;
    }
};

} // namespace

ScenarioConfig ScenarioConfig::from_key_values(const KeyValueConfig& kv) {
    Validator v(kv);
    ScenarioConfig sc;

    const std::string family = v.word("model", "family", "drude");
    try {
        sc.model.family = coupling_family_from_string(family);
    } catch (const std::exception& e) {
        v.note_error("model", "family", e.what());
    }
    sc.model.amplitude = v.number("model", "A", 1.0);
    sc.model.nu0 = v.number("model", "nu0", 1.0);
    sc.model.gamma = v.number("model", "gamma", 0.1);
    sc.model.omega_d = v.number("model", "omega_d", 10.0);
    sc.model.u0 = v.number("model", "u0", 1.0);

    sc.pair.mass = v.number("pair", "mass", 1.0);
    sc.pair.omega0 = v.number("pair", "omega0", 1.0);
    sc.pair.d = v.number("pair", "d", 0.0);

    sc.thermal.kT = v.number("thermal", "kT", 1.0);
    sc.thermal.hbar = v.number("thermal", "hbar", 1.0);
    const std::string mode = v.word("thermal", "mode", "classical");
    if (mode == "classical") {
        sc.thermal.mode = ThermalMode::Classical;
    } else if (mode == "quantum") {
        sc.thermal.mode = ThermalMode::Quantum;
    } else {
        v.note_error("thermal", "mode", "expected 'classical' or 'quantum'");
    }
    sc.grid.nu_max = v.number("thermal", "nu_max", 20.0);
    sc.grid.n_modes = static_cast<std::size_t>(v.integer("thermal", "n_modes", 512));
    sc.strict_truncation = v.boolean("thermal", "strict", false);

    const std::string method = v.word("solver", "method", "localized");
    try {
        sc.method = solver_method_from_string(method);
    } catch (const std::exception& e) {
        v.note_error("solver", "method", e.what());
    }
    sc.solver.h = v.number("solver", "h", 0.01);
    sc.solver.t_end = v.number("solver", "t_end", 20.0);
    sc.seed = v.integer("solver", "seed", 12345);
    sc.n_realizations = static_cast<std::size_t>(v.integer("solver", "n_realizations", 1));
    sc.solver.ic.x1 = v.number("solver", "x1_0", 0.0);
    sc.solver.ic.v1 = v.number("solver", "v1_0", 0.0);
    sc.solver.ic.x2 = v.number("solver", "x2_0", 0.0);
    sc.solver.ic.v2 = v.number("solver", "v2_0", 0.0);
    sc.solver.memory_window = v.number("solver", "memory_window", 0.0);
    sc.solver.dynamic_noise_phase = v.boolean("solver", "dynamic_noise_phase", false);
    const std::string mc = v.word("solver", "mass_convention", "unit_mass");
    if (mc == "unit_mass") {
        sc.solver.mass_convention = MassConvention::UnitMass;
    } else if (mc == "explicit_M") {
        sc.solver.mass_convention = MassConvention::ExplicitM;
    } else {
        v.note_error("solver", "mass_convention", "expected 'unit_mass' or 'explicit_M'");
    }

    sc.output.directory = v.word("output", "directory", "out");
    sc.output.formats = v.words("output", "formats", {"csv", "json"});
    for (const auto& f : sc.output.formats)
        if (f != "csv" && f != "json") v.note_error("output", "formats", "unknown format '" + f + "'");

    v.reject_unknown();
    v.throw_if_errors();

    try {
        sc.model.validate();
        sc.pair.validate();
        sc.thermal.validate();
        sc.solver.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("configuration errors:\n  ") + e.what());
    }

    sc.canonical_text = kv.canonical_text();
    sc.config_hash = kv.canonical_hash_hex();
    return sc;
}

} // namespace bathlab
