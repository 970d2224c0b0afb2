// quadrature.hpp — numerical integration toolkit: adaptive Gauss-Kronrod,
// Gauss-Laguerre rules with scaled weights, and an accelerated cosine
// transform for oscillatory integrands on [0, inf).

#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include "bathlab/errors.hpp"

namespace bathlab {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;   // absolute error estimate
    std::size_t evals = 0;
};

struct QuadResultC {
    std::complex<double> value{0.0, 0.0};
    double error = 0.0;
    std::size_t evals = 0;
};

// Adaptive G7/K15 on [a, b]. Converged when the summed error estimate drops
// below max(abs_tol, rel_tol * |I|); otherwise throws QuadratureError.
QuadResult integrate_gk(const std::function<double(double)>& f, double a, double b,
                        double abs_tol = 1e-10, double rel_tol = 1e-8,
                        std::size_t max_intervals = 4000);

QuadResultC integrate_gk_complex(const std::function<std::complex<double>(double)>& f,
                                 double a, double b,
                                 double abs_tol = 1e-10, double rel_tol = 1e-8,
                                 std::size_t max_intervals = 4000);

// Gauss-Laguerre rule of order n. Weights are scaled by e^{x_i}, so
// sum_i w[i] * g(x[i]) approximates the plain integral of g over [0, inf)
// for integrands g that decay like e^{-x} times a smooth factor.
struct LaguerreRule {
    std::vector<double> x;
    std::vector<double> w;
};
const LaguerreRule& gauss_laguerre(std::size_t n);

// Integrates g over [0, inf) by Gauss-Laguerre with node doubling
// (n, 2n, ...) until two successive estimates agree to the tolerances.
double laguerre_doubling(const std::function<double(double)>& g,
                         double abs_tol = 1e-10, double rel_tol = 1e-7,
                         std::size_t n_start = 64, std::size_t n_max = 2048);

// int_0^inf w(x) cos(c x) dx for smooth w with a decaying envelope; c > 0.
// Integrates adaptively over half-period panels bounded by the zeros of
// cos(cx) and accelerates the alternating tail by repeated averaging.
// head_scale should be a length over which w varies (used to size the
// adaptive work in the first panels). Throws QuadratureError when the
// envelope does not decay or acceleration stalls.
double cos_transform_decaying(const std::function<double(double)>& w, double c,
                              double abs_tol = 1e-10, double rel_tol = 1e-7,
                              double head_scale = 1.0);

} // namespace bathlab
