#include "bathlab/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "bathlab/rng.hpp"
#include "bathlab/version.hpp"

#include "json.hpp"

namespace bathlab {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::ofstream open_checked(const std::string& path, bool force) {
    check_overwrite(path, force);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    return out;
}

} // namespace

void check_overwrite(const std::string& path, bool force) {
    if (!force && std::filesystem::exists(path))
        throw std::runtime_error("refusing to overwrite existing file (use --force): " + path);
}

void ensure_directory(const std::string& path) {
    if (path.empty()) return;
    std::filesystem::create_directories(path);
}

void write_kernel_csv(const std::string& path, const CouplingModel& model, double d,
                      const KernelTableColumns& c, const std::string& config_hash,
                      bool force) {
    auto out = open_checked(path, force);
    out << "# bathlab " << kVersion << " kernel table\n";
    out << "# model: " << model.tag() << " d=" << fmt(d) << "\n";
    out << "# config_hash: " << config_hash << "\n";
    out << "t,chi,chi_d,chi_R,chi_Z\n";
    for (std::size_t i = 0; i < c.t.size(); ++i) {
        out << fmt(c.t[i]) << ',' << fmt(c.chi[i]) << ',' << fmt(c.chi_d[i]) << ','
            << fmt(c.chi_r[i]) << ',' << fmt(c.chi_z[i]) << '\n';
    }
}

void write_potential_csv(const std::string& path, const CouplingModel& model, double d,
                         const std::vector<double>& u12, const std::vector<double>& V,
                         const std::vector<double>& F, const std::string& config_hash,
                         bool force) {
    auto out = open_checked(path, force);
    out << "# bathlab " << kVersion << " induced potential/force\n";
    out << "# model: " << model.tag() << " d=" << fmt(d) << "\n";
    out << "# config_hash: " << config_hash << "\n";
    out << "u12,V,F\n";
    for (std::size_t i = 0; i < u12.size(); ++i)
        out << fmt(u12[i]) << ',' << fmt(V[i]) << ',' << fmt(F[i]) << '\n';
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          const std::string& config_hash, bool force) {
    auto out = open_checked(path, force);
    out << "# bathlab " << kVersion << " trajectory (" << traj.solver_tag << ")\n";
    out << "# config_hash: " << config_hash << " seed: " << traj.seed << "\n";
    out << "t,x1,x2,v1,v2,R,Z,f1,f2\n";
    const bool has_noise = !traj.f1.empty();
    for (std::size_t i = 0; i < traj.size(); ++i) {
        out << fmt(traj.t(i)) << ',' << fmt(traj.x1[i]) << ',' << fmt(traj.x2[i]) << ','
            << fmt(traj.v1[i]) << ',' << fmt(traj.v2[i]) << ',' << fmt(traj.R[i]) << ','
            << fmt(traj.Z[i]) << ',' << fmt(has_noise ? traj.f1[i] : 0.0) << ','
            << fmt(has_noise ? traj.f2[i] : 0.0) << '\n';
    }
}

void write_trajectory_sidecar(const std::string& path, const Trajectory& traj,
                              const ScenarioConfig& scenario, bool force) {
    nlohmann::json j;
    j["version"] = kVersion;
    j["solver"] = traj.solver_tag;
    j["seed"] = traj.seed;
    j["config_hash"] = scenario.config_hash;
    j["config"] = scenario.canonical_text;
    j["model"] = scenario.model.tag();
    j["thermal"] = scenario.thermal.tag();
    j["rng"] = kRngName;
    j["h"] = traj.h;
    j["n"] = traj.size();
    write_text_file(path, j.dump(2) + "\n", force);
}

void write_response_csv(const std::string& path, const CouplingModel& model,
                        const OscillatorPair& pair, double h, const ResponseTable& r,
                        const std::string& config_hash, bool force) {
    auto out = open_checked(path, force);
    out << "# bathlab " << kVersion << " response functions\n";
    out << "# model: " << model.tag() << " omega0=" << fmt(pair.omega0) << " d=" << fmt(pair.d)
        << "\n";
    out << "# config_hash: " << config_hash << "\n";
    out << "t,eta_plus,xi_plus,eta_minus,xi_minus\n";
    for (std::size_t i = 0; i < r.eta_p.size(); ++i) {
        out << fmt(h * static_cast<double>(i)) << ',' << fmt(r.eta_p[i]) << ','
            << fmt(r.xi_p[i]) << ',' << fmt(r.eta_m[i]) << ',' << fmt(r.xi_m[i]) << '\n';
    }
}

std::string ensemble_summary_to_json_text(const EnsembleSummary& s) {
    nlohmann::json j;
    j["check"] = s.check;
    j["model"] = s.model_tag;
    j["params"] = {{"thermal", s.thermal_tag},
                   {"n_realizations", s.n_realizations},
                   {"z_threshold", s.z_threshold},
                   {"max_fail_fraction", s.max_fail_fraction},
                   {"master_seed", s.master_seed},
                   {"notes", s.notes},
                   {"rng", kRngName},
                   {"version", kVersion}};
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& c : s.cells) {
        cells.push_back({{"pair", c.pair},
                         {"lag", c.lag},
                         {"estimate", c.estimate},
                         {"stderr", c.stderr_est},
                         {"target", c.target},
                         {"z", c.z},
                         {"degenerate", c.degenerate}});
    }
    j["cells"] = cells;
    j["max_abs_z"] = s.max_abs_z;
    j["verdict"] = s.pass ? "pass" : "fail";
    return j.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& content, bool force) {
    auto out = open_checked(path, force);
    out << content;
}

} // namespace bathlab
