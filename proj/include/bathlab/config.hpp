// config.hpp — plain-text scenario configuration: sections of key = value
// lines (scalars and inline arrays), schema-validated into ScenarioConfig,
// with a canonical serialization and stable hash for provenance.

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bathlab/coupling.hpp"
#include "bathlab/gle.hpp"
#include "bathlab/induced.hpp"
#include "bathlab/thermal.hpp"

namespace bathlab {

// Raw parsed representation: section -> key -> token(s). Preserves nothing
// but the values; ordering never matters for the canonical form.
class KeyValueConfig {
public:
    // Parses the grammar:
    //   [section]
    //   key = value            # comment
    //   key = [v1, v2, v3]
    // Errors are reported with "<name>:<line>:" anchors.
    static KeyValueConfig parse_string(const std::string& text, const std::string& name);
    static KeyValueConfig parse_file(const std::string& path);

    // --set style override "section.key=value", applied before validation
    void apply_override(const std::string& spec);

    bool has(const std::string& section, const std::string& key) const;
    const std::vector<std::string>& values(const std::string& section,
                                           const std::string& key) const;

    void set(const std::string& section, const std::string& key,
             const std::vector<std::string>& vals);

    // canonical serialization: sorted sections / keys, canonical numbers
    std::string canonical_text() const;
    std::uint64_t canonical_hash() const;
    std::string canonical_hash_hex() const;

    const std::map<std::string, std::map<std::string, std::vector<std::string>>>& data() const {
        return data_;
    }

private:
    std::map<std::string, std::map<std::string, std::vector<std::string>>> data_;
};

enum class SolverMethod { VolterraFull, Localized, Modes, ModesLaplace, OhmicDde, WeakCoupling };

std::string to_string(SolverMethod method);
SolverMethod solver_method_from_string(const std::string& name);

struct OutputConfig {
    std::string directory = "out";
    std::vector<std::string> formats = {"csv", "json"};
};

// Fully validated scenario.
struct ScenarioConfig {
    CouplingModel model;
    OscillatorPair pair;
    ThermalState thermal;
    ModeGrid grid;
    bool strict_truncation = false;

    SolverMethod method = SolverMethod::Localized;
    SolverConfig solver;
    std::uint64_t seed = 12345;
    std::size_t n_realizations = 1;

    OutputConfig output;

    std::string config_hash; // canonical hash of the source key/value form
    std::string canonical_text;

    // Validates the whole key/value form against the schema; collects every
    // field-level problem into one ConfigError message.
    static ScenarioConfig from_key_values(const KeyValueConfig& kv);
};

} // namespace bathlab
