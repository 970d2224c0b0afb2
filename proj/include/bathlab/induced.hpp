// induced.hpp — bath-induced static potential and force between the two
// oscillators, obtained by eliminating the field modes.

#pragma once

#include "bathlab/coupling.hpp"

namespace bathlab {

// Two identical oscillators localized around x = 0 and x = d.
struct OscillatorPair {
    double mass = 1.0;
    double omega0 = 1.0;
    double d = 0.0;

    void validate() const {
        if (!(mass > 0.0)) throw std::invalid_argument("OscillatorPair: mass must be > 0");
        if (!(omega0 > 0.0)) throw std::invalid_argument("OscillatorPair: omega0 must be > 0");
        if (d < 0.0) throw std::invalid_argument("OscillatorPair: d must be >= 0");
    }
};

// V(u12), u12 = x1 - x2. ExponentialCutoff uses the Lorentzian closed form
// with V(inf) = 0. The Drude spectrum has a 1/nu^2 infrared divergence; the
// potential is defined up to a constant and we subtract the divergent
// u12-independent part, normalizing V(d) = -gamma u0 lambda_D. The
// regularized Drude potential grows linearly far from the minimum (string
// tension of the 1D field), so only differences and forces are physical.
// Ohmic throws DivergentSpectrumError (non-integrable spectrum).
double induced_potential(const CouplingModel& model, double u12, double d);

// F12 = -dV/du12, the force on oscillator 1 along +x; oscillator 2 receives
// -F12. Attractive toward u12 = d for both supported families.
double induced_force(const CouplingModel& model, double u12, double d);

// Sin moment D(w) = int_0^inf (nu g_nu^2 / omega_nu^2) sin(nu w) dnu.
// This is the drift part of the noise forces; note dV/du12 = D(u12 - d).
double induced_drift(const CouplingModel& model, double w);

// Defining-integral oracle for the ExponentialCutoff potential (absolutely
// convergent); used by tests against the closed form.
double induced_potential_quadrature_exp(const CouplingModel& model, double u12, double d,
                                        double abs_tol = 1e-10, double rel_tol = 1e-8);

} // namespace bathlab
