#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"

#include "bathlab/config.hpp"
#include "bathlab/io.hpp"

using namespace bathlab;

namespace {

const char* kSample = R"(# scenario
[model]
family = drude
gamma = 0.1
omega_d = 10.0
u0 = 1.0

[pair]
omega0 = 1.0
d = 2.0

[thermal]
kT = 1.0
mode = classical
nu_max = 20.0
n_modes = 256

[solver]
method = localized
h = 0.01
t_end = 5.0
seed = 42

[output]
directory = out
formats = [csv, json]
)";

} // namespace

TEST_CASE("config parses, validates, and hashes canonically") {
    KeyValueConfig kv = KeyValueConfig::parse_string(kSample, "sample");
    const ScenarioConfig sc = ScenarioConfig::from_key_values(kv);
    CHECK(sc.model.family == CouplingFamily::Drude);
    CHECK(sc.model.gamma == 1.0 * 0.1);
    CHECK(sc.pair.d == 2.0);
    CHECK(sc.grid.n_modes == 256);
    CHECK(sc.seed == 42);
    CHECK(sc.method == SolverMethod::Localized);
    CHECK(sc.output.formats.size() == 2);

    // reordering keys and sections leaves the canonical hash unchanged
    std::string shuffled = R"([solver]
seed = 42
t_end = 5.0
h = 0.01
method = localized

[output]
formats = [csv, json]
directory = out

[thermal]
n_modes = 256
nu_max = 20.0
mode = classical
kT = 1.000

[pair]
d = 2.0
omega0 = 1.0

[model]
u0 = 1.0
omega_d = 10.0
gamma = 0.1
family = drude
)";
    KeyValueConfig kv2 = KeyValueConfig::parse_string(shuffled, "shuffled");
    CHECK(kv.canonical_hash_hex() == kv2.canonical_hash_hex());

    // round trip through the canonical serialization preserves the hash
    KeyValueConfig kv3 = KeyValueConfig::parse_string(
        [&] {
            std::string text;
            std::string canon = kv.canonical_text();
            std::string section;
            // canonical text is section.key=value lines; rebuild grammar form
            std::istringstream in(canon);
            std::string line;
            while (std::getline(in, line)) {
                const auto dot = line.find('.');
                const auto eq = line.find('=');
                const std::string sec = line.substr(0, dot);
                if (sec != section) {
                    text += "[" + sec + "]\n";
                    section = sec;
                }
                text += line.substr(dot + 1, eq - dot - 1) + " = " + line.substr(eq + 1) + "\n";
            }
            return text;
        }(),
        "round");
    CHECK(kv3.canonical_hash_hex() == kv.canonical_hash_hex());
}

TEST_CASE("config rejects unknown keys and malformed input with line anchors") {
    std::string bad = kSample;
    bad += "\n[model]\n"; // re-opening a section is fine, repeating a key is not
    CHECK_THROWS_AS(static_cast<void>(KeyValueConfig::parse_string(bad + "gamma = 3\n", "bad")),
                    ConfigError);
    // unknown keys are rejected at validation
    KeyValueConfig kv = KeyValueConfig::parse_string(kSample, "s");
    kv.set("model", "not_a_parameter", {"1"});
    CHECK_THROWS_WITH_AS(static_cast<void>(ScenarioConfig::from_key_values(kv)),
                         doctest::Contains("unknown key"), ConfigError);

    CHECK_THROWS_WITH_AS(
        static_cast<void>(KeyValueConfig::parse_string("[model\nx = 1\n", "anch")),
        doctest::Contains("anch:1"), ConfigError);
    CHECK_THROWS_WITH_AS(
        static_cast<void>(KeyValueConfig::parse_string("[m]\nkey 3\n", "anch")),
        doctest::Contains("anch:2"), ConfigError);

    KeyValueConfig kv4 = KeyValueConfig::parse_string(kSample, "s");
    kv4.set("solver", "h", {"-0.5"});
    CHECK_THROWS_AS(static_cast<void>(ScenarioConfig::from_key_values(kv4)), ConfigError);
}

TEST_CASE("overrides apply before validation and change the hash") {
    KeyValueConfig kv = KeyValueConfig::parse_string(kSample, "s");
    const std::string before = kv.canonical_hash_hex();
    kv.apply_override("model.gamma=0.25");
    const ScenarioConfig sc = ScenarioConfig::from_key_values(kv);
    CHECK(sc.model.gamma == 0.25);
    CHECK(kv.canonical_hash_hex() != before);
    CHECK_THROWS_AS(kv.apply_override("no_dot_here"), ConfigError);
}

TEST_CASE("output files respect the overwrite guard") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "bathlab_io_test";
    fs::remove_all(dir);
    ensure_directory(dir.string());
    const std::string path = (dir / "file.json").string();
    write_text_file(path, "{}\n", false);
    CHECK_THROWS(write_text_file(path, "{}\n", false));
    CHECK_NOTHROW(write_text_file(path, "{\"x\":1}\n", true));
    fs::remove_all(dir);
}

TEST_CASE("ensemble summary serializes to the report schema") {
    EnsembleSummary s;
    s.check = "fdr";
    s.model_tag = "drude(...)";
    s.thermal_tag = "classical(...)";
    s.n_realizations = 10;
    CovCell cell;
    cell.pair = "12";
    cell.lag = 0.3;
    cell.estimate = 1.0;
    cell.stderr_est = 0.1;
    cell.target = 1.05;
    cell.z = -0.5;
    s.cells.push_back(cell);
    s.finalize();
    const std::string text = ensemble_summary_to_json_text(s);
    CHECK(text.find("\"check\": \"fdr\"") != std::string::npos);
    CHECK(text.find("\"verdict\": \"pass\"") != std::string::npos);
    CHECK(text.find("\"cells\"") != std::string::npos);
    CHECK(text.find("\"stderr\"") != std::string::npos);
}
