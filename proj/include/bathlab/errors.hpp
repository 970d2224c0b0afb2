// errors.hpp — exception types shared across the library

#pragma once

#include <stdexcept>
#include <string>

namespace bathlab {

// Quadrature did not reach the requested tolerance; carries the residual estimate.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double error_estimate)
        : std::runtime_error(what), error_estimate_(error_estimate) {}
    double error_estimate() const noexcept { return error_estimate_; }

private:
    double error_estimate_;
};

// Kernel -> coupling inversion failed (non-decaying table, bad tail fit, ...).
class InversionError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Spectrum not integrable for the requested quantity (e.g. Ohmic induced potential).
class DivergentSpectrumError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Time stepping went unstable or was configured inconsistently.
class SolverError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Configuration file / override problems; message is line-anchored where possible.
class ConfigError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace bathlab
