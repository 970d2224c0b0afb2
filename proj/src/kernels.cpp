#include "bathlab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "bathlab/quadrature.hpp"

namespace bathlab {

namespace {

// Exponential-cutoff bracket term (1 - 3 z^2) / (1 + z^2)^3 with z = nu0 * u.
double exp_cutoff_term(double nu0, double u) {
    const double z2 = nu0 * nu0 * u * u;
    const double den = 1.0 + z2;
    return (1.0 - 3.0 * z2) / (den * den * den);
}

// Position-resolved smooth kernel with effective spatial displacement w.
double chi_smooth_displaced(const CouplingModel& model, double dt, double w) {
    switch (model.family) {
        case CouplingFamily::ExponentialCutoff: {
            const double up = w + model.u0 * dt;
            const double um = w - model.u0 * dt;
            const double pref = model.amplitude * model.nu0 * model.nu0 * model.nu0 /
                                (model.u0 * model.u0);
            return pref * (exp_cutoff_term(model.nu0, up) + exp_cutoff_term(model.nu0, um));
        }
        case CouplingFamily::Drude: {
            const double tau = w / model.u0;
            return 0.5 * model.gamma * model.omega_d *
                   (std::exp(-model.omega_d * std::abs(dt + tau)) +
                    std::exp(-model.omega_d * std::abs(dt - tau)));
        }
        case CouplingFamily::Ohmic:
            throw std::invalid_argument(
                "chi_smooth: Ohmic kernel is distributional (delta); no pointwise value");
    }
    return 0.0;
}

} // namespace

double chi_smooth(const CouplingModel& model, double dt) {
    return chi_smooth_displaced(model, dt, 0.0);
}

double chi_smooth_shift(const CouplingModel& model, double dt, double w) {
    return chi_smooth_displaced(model, dt, w);
}

double chi_d_smooth(const CouplingModel& model, double dt, double d) {
    return chi_smooth_displaced(model, dt, -d);
}

KernelValue kernel_chi(const CouplingModel& model, double dt) {
    if (dt < 0.0) throw std::invalid_argument("kernel_chi: dt must be >= 0 (causal use only)");
    KernelValue v;
    if (model.family == CouplingFamily::Ohmic) {
        v.deltas.push_back({model.gamma, 0.0});
        return v;
    }
    v.smooth = chi_smooth_displaced(model, dt, 0.0);
    return v;
}

KernelValue kernel_chi_d(const CouplingModel& model, double dt, double d) {
    if (dt < 0.0 || d < 0.0)
        throw std::invalid_argument("kernel_chi_d: dt and d must be >= 0");
    KernelValue v;
    if (model.family == CouplingFamily::Ohmic) {
        v.deltas.push_back({0.5 * model.gamma, d / model.u0});
        return v;
    }
    v.smooth = chi_smooth_displaced(model, dt, -d);
    return v;
}

double kernel_chi_position(const CouplingModel& model, double dt, double dx, bool cross,
                           double d) {
    if (dt < 0.0) throw std::invalid_argument("kernel_chi_position: dt must be >= 0");
    const double w = cross ? dx - d : dx;
    switch (model.family) {
        case CouplingFamily::ExponentialCutoff:
        case CouplingFamily::Drude:
            return chi_smooth_displaced(model, dt, w);
        case CouplingFamily::Ohmic:
            // no closed form and no pointwise limit; quadrature reports the failure
            return kernel_chi_quadrature(model, dt, dx, cross, d);
    }
    return 0.0;
}

std::pair<KernelValue, KernelValue> mode_kernels(const CouplingModel& model, double dt,
                                                 double d) {
    KernelValue self = kernel_chi(model, dt);
    KernelValue crossed = kernel_chi_d(model, dt, d);
    KernelValue r, z;
    r.smooth = self.smooth + crossed.smooth;
    z.smooth = self.smooth - crossed.smooth;
    for (const auto& term : self.deltas) {
        r.deltas.push_back(term);
        z.deltas.push_back(term);
    }
    for (const auto& term : crossed.deltas) {
        r.deltas.push_back(term);
        z.deltas.push_back({-term.weight, term.delay});
    }
    return {r, z};
}

// --------------------------- defining integral -------------------------------

namespace {

// F(c) = (1/u0^2) int_0^inf g_nu^2 cos(c nu) dnu
double spectral_cos_moment(const CouplingModel& model, double c, double abs_tol,
                           double rel_tol) {
    const double u0sq = model.u0 * model.u0;
    switch (model.family) {
        case CouplingFamily::ExponentialCutoff: {
            // A nu0^3 / u0^2 * int mu^2 e^{-mu} cos(c nu0 mu) dmu
            const double a = c * model.nu0;
            const double pref = model.amplitude * model.nu0 * model.nu0 * model.nu0 / u0sq;
            auto g = [a](double mu) { return mu * mu * std::exp(-mu) * std::cos(a * mu); };
            return pref * laguerre_doubling(g, abs_tol / std::max(pref, 1e-300), rel_tol, 64, 4096);
        }
        case CouplingFamily::Drude: {
            const double lam = model.lambda_d();
            const double pref = 2.0 * model.gamma * model.u0 / M_PI;
            if (c == 0.0) return pref * 0.5 * M_PI / lam;
            auto w = [lam](double nu) { return 1.0 / (1.0 + lam * lam * nu * nu); };
            return pref *
                   cos_transform_decaying(w, c, abs_tol / std::max(pref, 1e-300), rel_tol,
                                          1.0 / lam);
        }
        case CouplingFamily::Ohmic: {
            const double pref = model.u0 * model.gamma / M_PI;
            if (c == 0.0)
                throw QuadratureError(
                    "Ohmic spectral moment diverges (flat g_nu^2, delta kernel)", HUGE_VAL);
            auto w = [](double) { return 1.0; };
            // non-decaying envelope; cos_transform_decaying reports the failure
            return pref * cos_transform_decaying(w, c, abs_tol, rel_tol, 1.0);
        }
    }
    return 0.0;
}

} // namespace

double kernel_chi_quadrature(const CouplingModel& model, double dt, double dx, bool cross,
                             double d, double abs_tol, double rel_tol) {
    if (dt < 0.0) throw std::invalid_argument("kernel_chi_quadrature: dt must be >= 0");
    const double w = cross ? dx - d : dx;
    // cos(u0 dt nu) cos(w nu) = [cos(c+ nu) + cos(c- nu)] / 2
    const double cp = std::abs(w + model.u0 * dt);
    const double cm = std::abs(w - model.u0 * dt);
    return 0.5 * (spectral_cos_moment(model, cp, 2.0 * abs_tol, rel_tol) +
                  spectral_cos_moment(model, cm, 2.0 * abs_tol, rel_tol));
}

// ------------------------------ tabulation ----------------------------------

KernelTable tabulate_kernel(const CouplingModel& model, double h, std::size_t n, double d) {
    if (!(h > 0.0) || n < 2) throw std::invalid_argument("tabulate_kernel: need h > 0, n >= 2");
    KernelTable table;
    table.h = h;
    table.d = d;
    table.model_tag = model.tag();
    table.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = h * static_cast<double>(i);
        const double v =
            (d == 0.0) ? chi_smooth(model, t) : chi_d_smooth(model, t, d);
        if (!std::isfinite(v)) throw std::invalid_argument("tabulate_kernel: non-finite value");
        table.values[i] = v;
    }
    return table;
}

// ------------------------------ inversion -----------------------------------

namespace {

double inversion_prefactor(const CouplingModel& medium, const InversionOptions& opts) {
    const double u0 = medium.u0;
    if (opts.prefactor == InversionPrefactor::Consistent) return 2.0 * u0 * u0 * u0 / M_PI;
    // printed variant: 2 omega_nu^2 / (pi nu^2) = 2 u0^2 / pi, cosine argument nu t
    return 2.0 * u0 * u0 / M_PI;
}

double inversion_omega(const CouplingModel& medium, double nu, const InversionOptions& opts) {
    return (opts.prefactor == InversionPrefactor::Consistent) ? medium.u0 * nu : nu;
}

// int_0^T chi(t) cos(omega t) dt split into half-period panels when oscillatory
double cos_weighted_integral(const std::function<double(double)>& chi, double T, double omega,
                             double abs_tol, double rel_tol) {
    auto f = [&](double t) { return chi(t) * std::cos(omega * t); };
    const double total_phase = std::abs(omega) * T;
    if (total_phase < 20.0 * M_PI) {
        return integrate_gk(f, 0.0, T, abs_tol, rel_tol, 20000).value;
    }
    const double half_period = M_PI / std::abs(omega);
    double acc = 0.0;
    double lo = 0.0;
    const double panel_tol = abs_tol / (T / half_period + 1.0);
    while (lo < T) {
        const double hi = std::min(lo + half_period, T);
        acc += integrate_gk(f, lo, hi, panel_tol, rel_tol * 0.1, 2000).value;
        lo = hi;
    }
    return acc;
}

} // namespace

double invert_kernel_to_coupling(const std::function<double(double)>& chi, double t_scale,
                                 const CouplingModel& medium, double nu,
                                 const InversionOptions& opts) {
    if (nu < 0.0) throw std::invalid_argument("invert_kernel_to_coupling: nu must be >= 0");
    if (!(t_scale > 0.0)) throw std::invalid_argument("invert_kernel_to_coupling: t_scale > 0");
    const double omega = inversion_omega(medium, nu, opts);
    const double T = 45.0 * t_scale;
    const double integral = cos_weighted_integral(chi, T, omega, opts.abs_tol, opts.rel_tol);
    return inversion_prefactor(medium, opts) * integral;
}

double invert_kernel_to_coupling(const KernelTable& table, const CouplingModel& medium,
                                 double nu, const InversionOptions& opts) {
    if (nu < 0.0) throw std::invalid_argument("invert_kernel_to_coupling: nu must be >= 0");
    const std::size_t n = table.values.size();
    if (n < 8) throw InversionError("kernel table too short to invert");
    const double omega = inversion_omega(medium, nu, opts);

    // trapezoid over the table
    double integral = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = table.h * static_cast<double>(i);
        const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
        integral += w * table.values[i] * std::cos(omega * t);
    }
    integral *= table.h;

    // exponential tail fitted over the trailing window: chi ~ s C e^{-kappa t}
    std::size_t fit_n = std::max<std::size_t>(8, static_cast<std::size_t>(
                                                     opts.tail_fit_fraction * static_cast<double>(n)));
    fit_n = std::min(fit_n, n - 1);
    const std::size_t i0 = n - fit_n;

    double table_peak = 0.0, window_peak = 0.0;
    for (std::size_t i = 0; i < n; ++i) table_peak = std::max(table_peak, std::abs(table.values[i]));
    for (std::size_t i = i0; i < n; ++i)
        window_peak = std::max(window_peak, std::abs(table.values[i]));
    if (table_peak == 0.0) return 0.0; // identically zero kernel
    if (window_peak <= 1e-14 * table_peak) {
        // tail already negligible; no extrapolation needed
        return inversion_prefactor(medium, opts) * integral;
    }

    const double sign = table.values[n - 1] >= 0.0 ? 1.0 : -1.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = i0; i < n; ++i) {
        const double v = sign * table.values[i];
        if (!(v > 0.0))
            throw InversionError("kernel table tail changes sign; cannot fit exponential tail");
        const double t = table.h * static_cast<double>(i);
        const double y = std::log(v);
        sx += t;
        sy += y;
        sxx += t * t;
        sxy += t * y;
    }
    const double m = static_cast<double>(fit_n);
    const double denom = m * sxx - sx * sx;
    const double slope = (m * sxy - sx * sy) / denom;
    const double inter = (sy - slope * sx) / m;
    const double kappa = -slope;
    if (!(kappa > 0.0)) throw InversionError("kernel table does not decay; inversion undefined");
    const double C = sign * std::exp(inter);
    const double T = table.t_max();
    // int_T^inf C e^{-kappa t} cos(omega t) dt
    const std::complex<double> pole(kappa, -omega);
    const std::complex<double> tail = std::exp(-pole * T) / pole;
    integral += C * tail.real();

    return inversion_prefactor(medium, opts) * integral;
}

double invert_kernel_to_coupling(const KernelValue& kernel, const CouplingModel& medium,
                                 double nu, const InversionOptions& opts) {
    if (!kernel.deltas.empty()) {
        const double omega = inversion_omega(medium, nu, opts);
        double integral = 0.0;
        for (const auto& term : kernel.deltas) {
            const double border = (term.delay == 0.0) ? 0.5 : 1.0;
            integral += border * term.weight * std::cos(omega * term.delay);
        }
        return inversion_prefactor(medium, opts) * integral;
    }
    throw std::invalid_argument(
        "invert_kernel_to_coupling: smooth KernelValue carries no time dependence; "
        "use the function or table overload");
}

} // namespace bathlab
