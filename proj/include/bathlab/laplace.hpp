// laplace.hpp — numerical inverse Laplace transform on the Bromwich line
// (de Hoog / Knight / Stokes quotient-difference accelerated Fourier series).
// Chosen over collapsing-contour schemes because the response functions here
// have weakly damped poles next to the imaginary axis.

#pragma once

#include <complex>
#include <functional>

namespace bathlab {

using LaplaceImage = std::function<std::complex<double>(std::complex<double>)>;

struct InverseLaplaceOptions {
    int node_count = 32;        // series order M; 2M+1 image evaluations
    double tol = 1e-12;         // sets the Bromwich abscissa via -log(tol)/(2T)
    double time_scale = 4.0;    // T = time_scale * t
    double alpha = 0.0;         // upper bound on Re of the image's singularities
};

// f(t) for t > 0. The image must be analytic right of Re(s) = alpha.
double inverse_laplace(const LaplaceImage& F, double t,
                       const InverseLaplaceOptions& opts = {});

struct CheckedInversion {
    double value = 0.0;
    double check_diff = 0.0; // |value - value at 3/2 node count|
    bool flagged = false;    // check_diff above the flag threshold
};

// Runs the inversion at M and at 3M/2 nodes; flags the point when the two
// disagree beyond flag_tol.
CheckedInversion inverse_laplace_checked(const LaplaceImage& F, double t,
                                         const InverseLaplaceOptions& opts = {},
                                         double flag_tol = 1e-6);

} // namespace bathlab
