// kernels.hpp — memory / response kernels chi of the scalar-field bath:
// closed forms, defining-integral quadrature, tabulation, and the
// kernel -> coupling inversion.

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "bathlab/coupling.hpp"

namespace bathlab {

// One Dirac-delta contribution weight * delta(t - delay). Delta kernels are
// carried symbolically; integrators apply the border convention
// int_0^t delta(t-t') dt' = 1/2 when the delta sits on an interval edge.
struct DeltaTerm {
    double weight = 0.0;
    double delay = 0.0;
};

// Kernel value at one time separation: a smooth part plus delta terms.
// Smooth families (ExponentialCutoff, Drude) populate `smooth` only; the
// Ohmic family is purely distributional and populates `deltas` only.
struct KernelValue {
    double smooth = 0.0;
    std::vector<DeltaTerm> deltas;

    bool is_smooth() const { return deltas.empty(); }
};

// chi(dt): self memory kernel at time separation dt >= 0.
KernelValue kernel_chi(const CouplingModel& model, double dt);

// chi(dt; d): cross kernel between oscillators at equilibrium separation d.
KernelValue kernel_chi_d(const CouplingModel& model, double dt, double d);

// Position-resolved kernel with spatial displacement dx. The self kernel
// uses arguments dx +- u0 dt, the cross kernel (dx - d) +- u0 dt. Reduces
// exactly to kernel_chi / kernel_chi_d at dx = 0 (same code path).
// Ohmic has no pointwise value; the quadrature fallback reports failure.
double kernel_chi_position(const CouplingModel& model, double dt, double dx, bool cross,
                           double d);

// (chi_R, chi_Z) = (chi + chi_d, chi - chi_d).
std::pair<KernelValue, KernelValue> mode_kernels(const CouplingModel& model, double dt,
                                                 double d);

// Scalar closed forms for the smooth families; throw for Ohmic.
double chi_smooth(const CouplingModel& model, double dt);
double chi_d_smooth(const CouplingModel& model, double dt, double d);

// Smooth kernel with an explicit effective spatial displacement w (the
// position-resolved form; pass w = dx for self terms, dx - d for cross).
double chi_smooth_shift(const CouplingModel& model, double dt, double w);

// Adaptive quadrature of the defining nu-integral
//   (1/u0^2) int_0^inf g_nu^2 cos(u0 nu dt) cos(nu dx_eff) dnu,
// where dx_eff = dx for the self kernel and dx - d for the cross kernel.
// Used as the oracle against the closed forms and as the fallback path.
double kernel_chi_quadrature(const CouplingModel& model, double dt, double dx, bool cross,
                             double d, double abs_tol = 1e-10, double rel_tol = 1e-8);

// ------------------------------ tabulation ----------------------------------

struct KernelTable {
    double h = 0.0;               // uniform step, grid starts at t = 0
    std::vector<double> values;   // chi(i h)
    double d = 0.0;               // separation the table was built for (0 = self)
    std::string model_tag;

    double t_max() const { return h * static_cast<double>(values.empty() ? 0 : values.size() - 1); }
};

// Samples the smooth closed form on n points with step h (Ohmic throws).
KernelTable tabulate_kernel(const CouplingModel& model, double h, std::size_t n, double d);

// ------------------------------ inversion -----------------------------------

enum class InversionPrefactor {
    Consistent,   // g^2 = (2 u0^3 / pi) int chi(t) cos(u0 nu t) dt
    PaperPrinted, // g^2 = (2 omega_nu^2 / (pi nu^2)) int chi(t) cos(nu t) dt
};

struct InversionOptions {
    InversionPrefactor prefactor = InversionPrefactor::Consistent;
    double abs_tol = 1e-12;
    double rel_tol = 1e-9;
    double tail_fit_fraction = 0.25; // trailing fraction of a table used for the exponential tail fit
};

// Inverts a closed-form kernel chi(t) with decay scale t_scale (support hint).
double invert_kernel_to_coupling(const std::function<double(double)>& chi, double t_scale,
                                 const CouplingModel& medium, double nu,
                                 const InversionOptions& opts = {});

// Inverts a tabulated kernel; the tail beyond the table is extrapolated by a
// single exponential fitted over the trailing window.
double invert_kernel_to_coupling(const KernelTable& table, const CouplingModel& medium,
                                 double nu, const InversionOptions& opts = {});

// Inverts a delta kernel (border convention 1/2 for a delta at t = 0).
double invert_kernel_to_coupling(const KernelValue& kernel, const CouplingModel& medium,
                                 double nu, const InversionOptions& opts = {});

} // namespace bathlab
