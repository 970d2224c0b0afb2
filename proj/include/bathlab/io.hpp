// io.hpp — CSV and JSON outputs with provenance headers and overwrite guards.

#pragma once

#include <string>
#include <vector>

#include "bathlab/analysis.hpp"
#include "bathlab/config.hpp"
#include "bathlab/gle.hpp"

namespace bathlab {

// Refuses to overwrite an existing file unless force is set.
void check_overwrite(const std::string& path, bool force);

void ensure_directory(const std::string& path);

struct KernelTableColumns {
    std::vector<double> t, chi, chi_d, chi_r, chi_z;
};

void write_kernel_csv(const std::string& path, const CouplingModel& model, double d,
                      const KernelTableColumns& columns, const std::string& config_hash,
                      bool force);

void write_potential_csv(const std::string& path, const CouplingModel& model, double d,
                         const std::vector<double>& u12, const std::vector<double>& V,
                         const std::vector<double>& F, const std::string& config_hash,
                         bool force);

void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          const std::string& config_hash, bool force);

// JSON sidecar: config canonical text + hash, seed, solver tag, version.
void write_trajectory_sidecar(const std::string& path, const Trajectory& traj,
                              const ScenarioConfig& scenario, bool force);

void write_response_csv(const std::string& path, const CouplingModel& model,
                        const OscillatorPair& pair, double h,
                        const ResponseTable& responses, const std::string& config_hash,
                        bool force);

// JSON report per the analysis schema:
// {check, model, params, cells:[{pair, lag, estimate, stderr, target, z}], verdict}
std::string ensemble_summary_to_json_text(const EnsembleSummary& summary);

void write_text_file(const std::string& path, const std::string& content, bool force);

} // namespace bathlab
