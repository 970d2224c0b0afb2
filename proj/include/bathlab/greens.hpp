// greens.hpp — Green's function of the damped oscillator
// x'' + (gamma/2) x' + omega0^2 x = delta(t), with G(0) = 0, G'(0+) = 1.

#pragma once

namespace bathlab {

// G(t); 0 for t < 0. Underdamped, critical, and overdamped branches are all
// covered (oscillation rate sqrt(omega0^2 - (gamma/4)^2), continued to sinh).
double greens_function(double gamma, double omega0, double t);

// dG/dt for t > 0 (one-sided at 0: returns 1 at t = 0).
double greens_function_dot(double gamma, double omega0, double t);

// d^2G/dt^2 for t > 0.
double greens_function_ddot(double gamma, double omega0, double t);

} // namespace bathlab
