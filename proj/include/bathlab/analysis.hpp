// analysis.hpp — ensemble statistics: symmetrized covariance estimation with
// jackknife errors, FDR verification, equipartition and retardation checks.

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "bathlab/gle.hpp"
#include "bathlab/thermal.hpp"

namespace bathlab {

struct CovCell {
    std::string pair;   // "11", "22", "12", or a moment name
    double lag = 0.0;
    double estimate = 0.0;
    double stderr_est = 0.0;
    double target = 0.0;
    double z = 0.0;
    bool degenerate = false; // zero spread across realizations
};

struct EnsembleSummary {
    std::string check;
    std::string model_tag;
    std::string thermal_tag;
    std::size_t n_realizations = 0;
    double z_threshold = 3.0;
    double max_fail_fraction = 0.0; // allowed fraction of cells beyond the threshold
    std::vector<CovCell> cells;
    bool pass = false;
    double max_abs_z = 0.0;
    std::string notes;
    std::uint64_t master_seed = 0;
    std::string config_hash;

    void finalize(); // computes max_abs_z and the verdict from the cells
};

struct CovEstimate {
    double estimate = 0.0;
    double stderr_est = 0.0;
    bool degenerate = false;
};

// Unbiased symmetrized cross-moment <(a(t) b(t+lag) + b(t+lag) a(t)) / 2>,
// averaged over the stationary window and over realizations, with jackknife
// standard errors over realizations. Both orderings are evaluated explicitly
// so the estimator's symmetrization identity can be asserted.
CovEstimate symmetrized_covariance(const std::vector<std::vector<double>>& ens_a,
                                   const std::vector<std::vector<double>>& ens_b,
                                   std::size_t lag, bool symmetrized_path = true);

// Ensemble of sampled noise pairs on a common grid, with provenance.
struct NoiseEnsemble {
    double h = 0.0;
    std::size_t n_samples = 0;
    std::vector<std::vector<double>> f1, f2; // [realization][sample]
    std::string model_tag;
    std::string thermal_tag;
    double d = 0.0;
    double nu_max = 0.0;
    std::uint64_t master_seed = 0;
};

// Compares sample covariances of the ensemble against fdr_target at the given
// lag indices for pairs 11, 22, 12. Targets are evaluated with the ensemble's
// own spectral truncation nu_max. Refuses ensembles whose provenance tags do
// not match the supplied model / thermal state.
EnsembleSummary fdr_check(const CouplingModel& model, const ThermalState& thermal,
                          const NoiseEnsemble& ensemble, const std::vector<std::size_t>& lags,
                          double d);

// Per-realization time-averaged second moments (R^2, Z^2, Rdot^2, Zdot^2).
struct MomentEnsemble {
    std::vector<std::array<double, 4>> means;
    std::string model_tag;
    std::string thermal_tag;
    double burn_in = 0.0;
    std::uint64_t master_seed = 0;
};

// Long-run classical equilibrium check against kT/(2 w0^2), 2 kT/w0^2,
// kT/2, 2 kT (unit mass). Quantum mode is unsupported.
EnsembleSummary equipartition_check(const MomentEnsemble& ensemble,
                                    const ThermalState& thermal, const OscillatorPair& pair);

// First grid time with |x2| > eps for an impulse-protocol trajectory;
// +infinity when the threshold is never exceeded.
double retardation_onset(const Trajectory& traj, double eps);

} // namespace bathlab
