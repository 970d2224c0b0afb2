// gle.hpp — integrators for the two-oscillator generalized Langevin dynamics:
// full nonlinear Volterra system, localized linear system, decoupled R/Z
// modes (time domain and via Laplace responses), the Ohmic delay equations,
// and the weak-coupling series solution.

#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bathlab/coupling.hpp"
#include "bathlab/induced.hpp"
#include "bathlab/kernels.hpp"
#include "bathlab/laplace.hpp"
#include "bathlab/thermal.hpp"

namespace bathlab {

struct Trajectory {
    double h = 0.0;
    std::vector<double> x1, v1, x2, v2;
    std::vector<double> R, Z;          // mode representation, filled when available
    std::vector<double> f1, f2;         // noise samples consumed (empty = zero noise)
    std::uint64_t seed = 0;
    std::string solver_tag;
    std::string config_hash;

    std::size_t size() const { return x1.size(); }
    double t(std::size_t i) const { return h * static_cast<double>(i); }
    void fill_modes_from_xy();
    void fill_xy_from_modes();
};

struct InitialConditions {
    double x1 = 0.0, v1 = 0.0, x2 = 0.0, v2 = 0.0;
};

enum class MassConvention { UnitMass, ExplicitM };

struct SolverConfig {
    double h = 0.01;
    double t_end = 20.0;
    InitialConditions ic;
    bool dynamic_noise_phase = false;   // integrate_full: re-evaluate noise phases at x(t)
    MassConvention mass_convention = MassConvention::UnitMass;
    double memory_window = 0.0;         // 0 = full history; > 0 enables the exponential-tail window
    double energy_guard_factor = 1e6;   // instability detector: E may not exceed this multiple
    double energy_guard_scale = 0.0;    // extra additive scale (e.g. kT) for the guard

    std::size_t n_steps() const;        // number of grid points (n_steps - 1 intervals)
    void validate() const;
};

// ---------------------------- time-domain solvers ----------------------------

// Localized linear Volterra system driven by sampled noise (nullptr = zero
// noise; the series must live on the solver grid). Handles smooth kernels by
// trapezoidal memory convolution and Ohmic delta kernels symbolically.
Trajectory integrate_localized(const CouplingModel& model, const OscillatorPair& pair,
                               const NoisePair* noise, const SolverConfig& cfg);

// Decoupled R / Z generalized Langevin equations with the mode kernels;
// recombines x1 = R - Z/2, x2 = R + Z/2.
Trajectory integrate_modes(const CouplingModel& model, const OscillatorPair& pair,
                           const std::vector<double>* noise_r,
                           const std::vector<double>* noise_z, const SolverConfig& cfg);

// Full nonlinear Volterra system with position-dependent kernels, the induced
// force, and the drift part of the noise forces. ExponentialCutoff only
// (closed-form kernels keep the inner loop tractable).
Trajectory integrate_full(const CouplingModel& model, const OscillatorPair& pair,
                          const BathRealization* bath, const SolverConfig& cfg);

// Ohmic delay-differential system, RK4 method of steps. `noise` must be
// sampled with spacing cfg.h / 2 (stage times); nullptr = zero noise.
// History for t < 0 defaults to the initial positions at rest.
using DdeHistory = std::function<std::array<double, 4>(double)>; // (x1, v1, x2, v2)
Trajectory integrate_ohmic_dde(double gamma, double u0, const OscillatorPair& pair,
                               const NoisePair* noise, const SolverConfig& cfg,
                               const DdeHistory& history = nullptr);

// Rounds h down so the delay tau0 is an integer number of steps.
double align_step_to_delay(double h, double tau0);

// ----------------------------- Laplace domain --------------------------------

// (chi_tilde(s), chi_tilde(s; d)) for Re(s) > 0.
std::pair<std::complex<double>, std::complex<double>> laplace_kernel(
    const CouplingModel& model, std::complex<double> s, double d);

struct ResponseValue {
    double eta = 0.0;
    double xi = 0.0;
};

// eta_pm, xi_pm at time t; sign = +1 selects the R image, -1 the Z image.
// Inverts the Laplace images numerically with a node-count consistency check
// (retries on a rescaled series before giving up).
ResponseValue response_eta_xi(const CouplingModel& model, const OscillatorPair& pair,
                              int sign, double t, const InverseLaplaceOptions& opts = {});

// Tabulates eta_pm, xi_pm on the grid i*h, i = 0..n-1 (exact values at t=0).
struct ResponseTable {
    std::vector<double> eta_p, xi_p, eta_m, xi_m;
};
ResponseTable tabulate_responses(const CouplingModel& model, const OscillatorPair& pair,
                                 double h, std::size_t n,
                                 const InverseLaplaceOptions& opts = {});

// Builds R, Z from the Laplace responses plus a convolution with the mode
// noises, then recombines the oscillator coordinates. Velocities are filled
// by second-order finite differences of the reconstructed positions.
Trajectory solve_modes_laplace(const CouplingModel& model, const OscillatorPair& pair,
                               const std::vector<double>* noise_r,
                               const std::vector<double>* noise_z, const SolverConfig& cfg,
                               const InverseLaplaceOptions& opts = {});

// ----------------------------- weak coupling ---------------------------------

// O(gamma) series solution of the Ohmic delay equations for zero initial
// conditions: x_i = G * f_i - (gamma/2) G * [dot(G * f_j)](t - tau0).
// Returns (x1, x2) on the grid of the noise series.
std::pair<std::vector<double>, std::vector<double>> weak_coupling_solution(
    double gamma, double omega0, double tau0, const std::vector<double>& f1,
    const std::vector<double>& f2, double h);

} // namespace bathlab
