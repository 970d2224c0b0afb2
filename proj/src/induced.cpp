#include "bathlab/induced.hpp"

#include <cmath>

#include "bathlab/quadrature.hpp"

namespace bathlab {

double induced_potential(const CouplingModel& model, double u12, double d) {
    const double w = u12 - d;
    switch (model.family) {
        case CouplingFamily::ExponentialCutoff: {
            const double z2 = model.nu0 * model.nu0 * w * w;
            return -model.amplitude * model.nu0 / (model.u0 * model.u0) / (1.0 + z2);
        }
        case CouplingFamily::Drude: {
            const double lam = model.lambda_d();
            const double aw = std::abs(w);
            const double g = model.gamma * model.u0;
            // finite part gamma u0 (|w| + lam e^{-|w|/lam}), shifted so V(d) = -gamma u0 lam
            return g * (aw + lam * std::expm1(-aw / lam)) - g * lam;
        }
        case CouplingFamily::Ohmic:
            throw DivergentSpectrumError(
                "induced_potential: Ohmic g^2/omega^2 ~ 1/nu^2 is not integrable at nu -> 0");
    }
    return 0.0;
}

double induced_force(const CouplingModel& model, double u12, double d) {
    const double w = u12 - d;
    switch (model.family) {
        case CouplingFamily::ExponentialCutoff: {
            const double nu0 = model.nu0;
            const double den = 1.0 + nu0 * nu0 * w * w;
            return -2.0 * model.amplitude * nu0 * nu0 * nu0 / (model.u0 * model.u0) * w /
                   (den * den);
        }
        case CouplingFamily::Drude: {
            const double lam = model.lambda_d();
            const double s = (w > 0.0) ? 1.0 : (w < 0.0 ? -1.0 : 0.0);
            return model.gamma * model.u0 * s * std::expm1(-std::abs(w) / lam);
        }
        case CouplingFamily::Ohmic:
            throw DivergentSpectrumError(
                "induced_force: Ohmic spectrum is not integrable at nu -> 0");
    }
    return 0.0;
}

double induced_drift(const CouplingModel& model, double w) {
    switch (model.family) {
        case CouplingFamily::ExponentialCutoff: {
            const double nu0 = model.nu0;
            const double den = 1.0 + nu0 * nu0 * w * w;
            return 2.0 * model.amplitude * nu0 * nu0 * nu0 / (model.u0 * model.u0) * w /
                   (den * den);
        }
        case CouplingFamily::Drude: {
            const double lam = model.lambda_d();
            const double s = (w > 0.0) ? 1.0 : (w < 0.0 ? -1.0 : 0.0);
            return -model.gamma * model.u0 * s * std::expm1(-std::abs(w) / lam);
        }
        case CouplingFamily::Ohmic:
            throw DivergentSpectrumError("induced_drift: Ohmic spectrum not supported");
    }
    return 0.0;
}

double induced_potential_quadrature_exp(const CouplingModel& model, double u12, double d,
                                        double abs_tol, double rel_tol) {
    if (model.family != CouplingFamily::ExponentialCutoff)
        throw std::invalid_argument("induced_potential_quadrature_exp: ExponentialCutoff only");
    const double w = u12 - d;
    const double pref = model.amplitude / (model.u0 * model.u0);
    auto g = [&](double mu) { return std::exp(-mu) * std::cos(model.nu0 * w * mu); };
    // V = -(A/u0^2) int e^{-nu/nu0} cos(nu w) dnu = -(A nu0/u0^2) int e^{-mu} cos(nu0 w mu) dmu
    return -pref * model.nu0 * laguerre_doubling(g, abs_tol, rel_tol, 64, 4096);
}

} // namespace bathlab
