// coupling.hpp — bath coupling families g_nu^2 and the propagation medium.

#pragma once

#include <string>

#include "bathlab/errors.hpp"

namespace bathlab {

enum class CouplingFamily { ExponentialCutoff, Ohmic, Drude };

std::string to_string(CouplingFamily family);
CouplingFamily coupling_family_from_string(const std::string& name);

// One bath specification: which g_nu^2 family plus the propagation speed u0.
// The dispersion is linear, omega_nu = u0 * nu, throughout.
struct CouplingModel {
    CouplingFamily family = CouplingFamily::Drude;
    double amplitude = 1.0;   // A      (ExponentialCutoff)
    double nu0 = 1.0;         // nu_0   (ExponentialCutoff cutoff wavenumber)
    double gamma = 0.1;       // friction rate (Ohmic, Drude)
    double omega_d = 10.0;    // Drude cutoff frequency
    double u0 = 1.0;          // propagation (sound) speed

    static CouplingModel exponential_cutoff(double A, double nu0, double u0 = 1.0);
    static CouplingModel ohmic(double gamma, double u0 = 1.0);
    static CouplingModel drude(double gamma, double omega_d, double u0 = 1.0);

    // throws std::invalid_argument when a parameter violates its positivity bound
    void validate() const;

    double dispersion(double nu) const { return u0 * nu; }

    // lambda_D = u0 / omega_D; only meaningful for the Drude family
    double lambda_d() const { return u0 / omega_d; }

    // characteristic wavenumber of the family (cutoff scale)
    double nu_char() const;

    // short provenance string, e.g. "drude(gamma=0.1,omega_d=10,u0=1)"
    std::string tag() const;
};

// g_nu^2 at wavenumber nu >= 0.
double coupling_strength_sq(const CouplingModel& model, double nu);

} // namespace bathlab
