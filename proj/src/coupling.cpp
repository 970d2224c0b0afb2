#include "bathlab/coupling.hpp"

#include <cmath>
#include <sstream>

namespace bathlab {

std::string to_string(CouplingFamily family) {
    switch (family) {
        case CouplingFamily::ExponentialCutoff: return "exponential_cutoff";
        case CouplingFamily::Ohmic: return "ohmic";
        case CouplingFamily::Drude: return "drude";
    }
    return "unknown";
}

CouplingFamily coupling_family_from_string(const std::string& name) {
    if (name == "exponential_cutoff" || name == "exponential") return CouplingFamily::ExponentialCutoff;
    if (name == "ohmic") return CouplingFamily::Ohmic;
    if (name == "drude") return CouplingFamily::Drude;
    throw std::invalid_argument("unknown coupling family: " + name);
}

CouplingModel CouplingModel::exponential_cutoff(double A, double nu0, double u0) {
    CouplingModel m;
    m.family = CouplingFamily::ExponentialCutoff;
    m.amplitude = A;
    m.nu0 = nu0;
    m.u0 = u0;
    m.validate();
    return m;
}

CouplingModel CouplingModel::ohmic(double gamma, double u0) {
    CouplingModel m;
    m.family = CouplingFamily::Ohmic;
    m.gamma = gamma;
    m.u0 = u0;
    m.validate();
    return m;
}

CouplingModel CouplingModel::drude(double gamma, double omega_d, double u0) {
    CouplingModel m;
    m.family = CouplingFamily::Drude;
    m.gamma = gamma;
    m.omega_d = omega_d;
    m.u0 = u0;
    m.validate();
    return m;
}

void CouplingModel::validate() const {
    if (!(u0 > 0.0)) throw std::invalid_argument("CouplingModel: u0 must be > 0");
    switch (family) {
        case CouplingFamily::ExponentialCutoff:
            // A = 0 is allowed and turns the coupling off (free-oscillator limit)
            if (amplitude < 0.0) throw std::invalid_argument("CouplingModel: A must be >= 0");
            if (!(nu0 > 0.0)) throw std::invalid_argument("CouplingModel: nu0 must be > 0");
            break;
        case CouplingFamily::Ohmic:
            if (!(gamma > 0.0)) throw std::invalid_argument("CouplingModel: gamma must be > 0");
            break;
        case CouplingFamily::Drude:
            if (!(gamma > 0.0)) throw std::invalid_argument("CouplingModel: gamma must be > 0");
            if (!(omega_d > 0.0)) throw std::invalid_argument("CouplingModel: omega_d must be > 0");
            break;
    }
}

double CouplingModel::nu_char() const {
    switch (family) {
        case CouplingFamily::ExponentialCutoff: return nu0;
        case CouplingFamily::Ohmic: return 1.0 / u0; // no intrinsic cutoff; unit wavenumber scale
        case CouplingFamily::Drude: return omega_d / u0;
    }
    return 1.0;
}

std::string CouplingModel::tag() const {
    std::ostringstream os;
    os.precision(17);
    switch (family) {
        case CouplingFamily::ExponentialCutoff:
            os << "exponential_cutoff(A=" << amplitude << ",nu0=" << nu0 << ",u0=" << u0 << ")";
            break;
        case CouplingFamily::Ohmic:
            os << "ohmic(gamma=" << gamma << ",u0=" << u0 << ")";
            break;
        case CouplingFamily::Drude:
            os << "drude(gamma=" << gamma << ",omega_d=" << omega_d << ",u0=" << u0 << ")";
            break;
    }
    return os.str();
}

double coupling_strength_sq(const CouplingModel& model, double nu) {
    if (nu < 0.0) throw std::invalid_argument("coupling_strength_sq: nu must be >= 0");
    switch (model.family) {
        case CouplingFamily::ExponentialCutoff:
            return model.amplitude * nu * nu * std::exp(-nu / model.nu0);
        case CouplingFamily::Ohmic:
            return model.u0 * model.u0 * model.u0 * model.gamma / M_PI;
        case CouplingFamily::Drude: {
            const double lam = model.lambda_d();
            const double u3 = model.u0 * model.u0 * model.u0;
            return (2.0 * model.gamma * u3 / M_PI) / (1.0 + lam * lam * nu * nu);
        }
    }
    return 0.0;
}

} // namespace bathlab
