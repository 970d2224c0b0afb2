#include "bathlab/greens.hpp"

#include <cmath>
#include <stdexcept>

namespace bathlab {

namespace {

struct OscParts {
    double s;  // sin-like: sin(bt)/b, sinh(bt)/b, or t at criticality
    double c;  // cos-like: cos(bt) or cosh(bt)
};

// beta2 = omega0^2 - (gamma/4)^2; sign selects the trig / hyperbolic branch.
OscParts osc_parts(double beta2, double t) {
    const double z2 = beta2 * t * t;
    if (std::abs(z2) < 1e-8) {
        // unified series around criticality, valid for either sign
        const double s = t * (1.0 - z2 / 6.0 + z2 * z2 / 120.0);
        const double c = 1.0 - z2 / 2.0 + z2 * z2 / 24.0;
        return {s, c};
    }
    if (beta2 > 0.0) {
        const double b = std::sqrt(beta2);
        return {std::sin(b * t) / b, std::cos(b * t)};
    }
    const double b = std::sqrt(-beta2);
    return {std::sinh(b * t) / b, std::cosh(b * t)};
}

void check_params(double gamma, double omega0) {
    if (gamma < 0.0) throw std::invalid_argument("greens_function: gamma must be >= 0");
    if (!(omega0 > 0.0)) throw std::invalid_argument("greens_function: omega0 must be > 0");
}

} // namespace

double greens_function(double gamma, double omega0, double t) {
    check_params(gamma, omega0);
    if (t < 0.0) return 0.0;
    const double a = 0.25 * gamma;
    const double beta2 = omega0 * omega0 - a * a;
    return std::exp(-a * t) * osc_parts(beta2, t).s;
}

double greens_function_dot(double gamma, double omega0, double t) {
    check_params(gamma, omega0);
    if (t < 0.0) return 0.0;
    const double a = 0.25 * gamma;
    const double beta2 = omega0 * omega0 - a * a;
    const auto [s, c] = osc_parts(beta2, t);
    return std::exp(-a * t) * (c - a * s);
}

double greens_function_ddot(double gamma, double omega0, double t) {
    check_params(gamma, omega0);
    if (t < 0.0) return 0.0;
    const double a = 0.25 * gamma;
    const double beta2 = omega0 * omega0 - a * a;
    const auto [s, c] = osc_parts(beta2, t);
    // s'' = -beta2 * s, so G'' = e^{-at} ((a^2 - beta2) s - 2 a c)
    return std::exp(-a * t) * ((a * a - beta2) * s - 2.0 * a * c);
}

} // namespace bathlab
