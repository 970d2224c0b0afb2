// thermal.hpp — thermal state of the bath, sampled mode realizations, and
// synthesis of the colored noise forces f1, f2 (and F_R, F_Z).

#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "bathlab/coupling.hpp"

namespace bathlab {

enum class ThermalMode { Classical, Quantum };

struct ThermalState {
    double kT = 1.0;    // k_B T energy scale
    double hbar = 1.0;  // 0 permitted as the classical switch
    ThermalMode mode = ThermalMode::Classical;

    void validate() const;
    std::string tag() const;

    // coth(hbar omega / 2 kT); 1 in the T -> 0 limit
    double coth_factor(double omega) const;
};

// Midpoint wavenumber grid nu_k = (k + 1/2) dnu, dnu = nu_max / n_modes.
struct ModeGrid {
    double nu_max = 0.0;
    std::size_t n_modes = 0;

    double delta_nu() const { return nu_max / static_cast<double>(n_modes); }
    double nu(std::size_t k) const { return (static_cast<double>(k) + 0.5) * delta_nu(); }
};

// One sampled set of bath-mode initial conditions. Per-mode target variances:
//   <y0^2> = <z0^2> = (hbar / 2 omega) coth(hbar omega / 2 kT) / dnu
//   <p0^2> = <q0^2> = (hbar omega / 2) coth(hbar omega / 2 kT) / dnu
// (classical limits kT/omega^2/dnu and kT/dnu), all cross-covariances zero.
struct BathRealization {
    ModeGrid grid;
    std::uint64_t seed = 0;
    std::vector<double> y0, p0, z0, q0;
    std::vector<double> force_weight; // dnu * nu_k * g_{nu_k}
    double u0 = 1.0;
    std::string model_tag;
    std::string thermal_tag;
    double truncation_fraction = 0.0; // spectral weight beyond nu_max
};

struct SampleOptions {
    bool strict = false;                    // promote the truncation warning to an error
    double truncation_warn_fraction = 0.01;
};

// Fraction of int (nu^2 g^2 / omega^2) dnu lying beyond nu_max. Returns 1 for
// the Ohmic family, whose total is not integrable.
double spectral_truncation_fraction(const CouplingModel& model, double nu_max);

BathRealization sample_bath(const CouplingModel& model, const ThermalState& thermal,
                            const ModeGrid& grid, std::uint64_t seed,
                            const SampleOptions& opts = {});

// Noise force on oscillator `which` (1 or 2) at time t, frozen-position
// phases (0 for oscillator 1, nu d for oscillator 2).
double noise_force(const BathRealization& bath, int which, double t, double d);

struct NoisePair {
    double t0 = 0.0;
    double h = 0.0;
    std::vector<double> f1, f2;
};

// Samples f1, f2 on the uniform grid t0 + i h by per-mode rotation
// recurrences (equivalent to noise_force at every node).
NoisePair noise_series(const BathRealization& bath, double d, double t0, double h,
                       std::size_t n);

// Fast path for long grids: exact evaluation of the mode sums by a radix-2
// FFT. Requires the commensurate condition u0 * dnu * h * n_fft = 2 pi
// (within roundoff) with power-of-two n_fft >= max(n, n_modes).
NoisePair noise_series_fft(const BathRealization& bath, double d, double h, std::size_t n,
                           std::size_t n_fft);

// dnu consistent with the commensurate FFT condition for the given h, n_fft.
double commensurate_delta_nu(double u0, double h, std::size_t n_fft);

// (F_R, F_Z) = ((f1 + f2)/2, f2 - f1); series must share the grid.
std::pair<std::vector<double>, std::vector<double>> mode_noises(
    const std::vector<double>& f1, const std::vector<double>& f2);

enum class CovariancePair { P11, P22, P12 };

// Symmetrized noise covariance target <f_i(t) f_j(t + dt)>_S at frozen
// positions. Classical with infinite support uses kT * chi closed forms;
// otherwise the defining spectral integral is evaluated on [0, nu_max].
// Quantum targets for Drude/Ohmic require a finite nu_max (the zero-point
// spectrum makes the full integral ultraviolet-divergent).
double fdr_target(const CouplingModel& model, const ThermalState& thermal, double dt,
                  CovariancePair pair, double d,
                  double nu_max = std::numeric_limits<double>::infinity());

} // namespace bathlab
