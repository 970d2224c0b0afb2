// ensemble.hpp — parallel ensemble generation over bath realizations with
// per-realization RNG streams and deterministic, index-ordered reduction.

#pragma once

#include <cstdint>
#include <functional>

#include "bathlab/analysis.hpp"
#include "bathlab/gle.hpp"
#include "bathlab/thermal.hpp"

namespace bathlab {

// Worker count: explicit request, else BATHLAB_WORKERS, else hardware.
std::size_t resolve_worker_count(std::size_t requested = 0);

// Runs fn(0..n-1) across a worker pool; results must be written into
// index-addressed slots by the callee (bit-stable reduction order).
void parallel_for_index(std::size_t n, std::size_t workers,
                        const std::function<void(std::size_t)>& fn);

// Noise ensemble for FDR verification: realization r uses the RNG stream
// derived from (master_seed, r); series sampled at spacing sample_h.
NoiseEnsemble generate_noise_ensemble(const CouplingModel& model, const ThermalState& thermal,
                                      const ModeGrid& grid, double d, std::size_t n_real,
                                      std::uint64_t master_seed, double sample_h,
                                      std::size_t n_samples, std::size_t workers = 0);

struct EquilibriumRunSpec {
    CouplingModel model;
    OscillatorPair pair;
    ThermalState thermal;
    double h = 0.02;
    double t_end = 1000.0;
    double nu_max = 30.0;        // actual grid snaps to the commensurate dnu
    std::size_t n_fft = 1 << 16;
    double burn_in = 50.0;
    double sample_every = 0.5;
    double memory_window = 6.0;  // exponential-tail window for the long run
    std::size_t n_real = 100;
    std::uint64_t master_seed = 1;
    std::size_t workers = 0;
};

// Long-run mode-GLE ensemble: FFT-synthesized noise on a commensurate grid,
// windowed Volterra integration of R and Z, per-realization time-averaged
// second moments after burn-in.
MomentEnsemble run_equilibrium_ensemble(const EquilibriumRunSpec& spec);

} // namespace bathlab
