// Laplace images of the kernels, response functions eta_pm / xi_pm by
// numerical inversion, and the trajectory reconstruction R(t) = xi R(0)
// + eta Rdot(0) + int eta F_R.

#include <cmath>

#include "bathlab/gle.hpp"
#include "bathlab/greens.hpp"
#include "bathlab/quadrature.hpp"

namespace bathlab {

namespace {

using cd = std::complex<double>;

// (e^z - 1) / z, stable near z = 0
cd cphi(cd z) {
    if (std::abs(z) < 1e-6) return 1.0 + z / 2.0 + z * z / 6.0;
    return (std::exp(z) - 1.0) / z;
}

} // namespace

std::pair<cd, cd> laplace_kernel(const CouplingModel& model, cd s, double d) {
    if (!(s.real() > 0.0))
        throw std::invalid_argument("laplace_kernel: requires Re(s) > 0");
    const double tau0 = d / model.u0;
    switch (model.family) {
        case CouplingFamily::Ohmic: {
            // border convention: int_0^t delta(t-t') dt' = 1/2
            const cd self(0.5 * model.gamma, 0.0);
            const cd cross = 0.5 * model.gamma * std::exp(-s * tau0);
            return {self, cross};
        }
        case CouplingFamily::Drude: {
            const double wd = model.omega_d;
            const double g = model.gamma;
            const cd self = g * wd / (s + wd);
            // transform of (gamma wd / 2)[e^{-wd|t+tau0|} + e^{-wd|t-tau0|}]
            const cd piece1 = std::exp(-wd * tau0) / (s + wd);
            const cd piece2 = std::exp(-s * tau0) / (s + wd);
            const cd piece3 = std::exp(-wd * tau0) * tau0 * cphi((wd - s) * tau0);
            const cd cross = 0.5 * g * wd * (piece1 + piece2 + piece3);
            return {self, cross};
        }
        case CouplingFamily::ExponentialCutoff: {
            if (model.amplitude == 0.0) return {cd(0.0, 0.0), cd(0.0, 0.0)};
            // chi_tilde(s) = (A/u0^2) int nu^2 e^{-nu/nu0} s/(s^2 + u0^2 nu^2) {1, cos(nu d)} dnu
            const double pref = model.amplitude / (model.u0 * model.u0);
            const double upper = 60.0 * model.nu0;
            auto self_f = [&](double nu) -> cd {
                const double g2 = nu * nu * std::exp(-nu / model.nu0);
                return g2 * s / (s * s + model.u0 * model.u0 * nu * nu);
            };
            auto cross_f = [&](double nu) -> cd {
                return self_f(nu) * std::cos(nu * d);
            };
            const cd self = pref * integrate_gk_complex(self_f, 0.0, upper, 1e-12, 1e-10, 8000).value;
            const cd cross =
                pref * integrate_gk_complex(cross_f, 0.0, upper, 1e-12, 1e-10, 8000).value;
            return {self, cross};
        }
    }
    return {cd(0.0, 0.0), cd(0.0, 0.0)};
}

namespace {

LaplaceImage make_eta_image(const CouplingModel& model, const OscillatorPair& pair, int sign) {
    const double w0sq = pair.omega0 * pair.omega0;
    const double d = pair.d;
    return [=](cd s) {
        auto [self, cross] = laplace_kernel(model, s, d);
        const cd chi = self + static_cast<double>(sign) * cross;
        return 1.0 / (s * s + s * chi + w0sq);
    };
}

LaplaceImage make_xi_image(const CouplingModel& model, const OscillatorPair& pair, int sign) {
    const double w0sq = pair.omega0 * pair.omega0;
    const double d = pair.d;
    return [=](cd s) {
        auto [self, cross] = laplace_kernel(model, s, d);
        const cd chi = self + static_cast<double>(sign) * cross;
        return (s + chi) / (s * s + s * chi + w0sq);
    };
}

// inversion with the node-count consistency check and a retry ladder
double invert_with_retry(const LaplaceImage& image, double t,
                         const InverseLaplaceOptions& opts) {
    auto attempt = inverse_laplace_checked(image, t, opts);
    if (!attempt.flagged) return attempt.value;
    InverseLaplaceOptions denser = opts;
    denser.node_count = 2 * opts.node_count;
    attempt = inverse_laplace_checked(image, t, denser);
    if (!attempt.flagged) return attempt.value;
    denser.time_scale = 1.5 * opts.time_scale; // rescale the series period and retry
    attempt = inverse_laplace_checked(image, t, denser);
    if (!attempt.flagged) return attempt.value;
    throw QuadratureError("inverse Laplace response evaluation did not stabilize at t = " +
                              std::to_string(t),
                          attempt.check_diff);
}

} // namespace

ResponseValue response_eta_xi(const CouplingModel& model, const OscillatorPair& pair,
                              int sign, double t, const InverseLaplaceOptions& opts) {
    model.validate();
    pair.validate();
    if (sign != 1 && sign != -1)
        throw std::invalid_argument("response_eta_xi: sign must be +1 or -1");
    if (t < 0.0) throw std::invalid_argument("response_eta_xi: t must be >= 0");
    if (t == 0.0) return {0.0, 1.0}; // initial-value theorem
    ResponseValue out;
    out.eta = invert_with_retry(make_eta_image(model, pair, sign), t, opts);
    out.xi = invert_with_retry(make_xi_image(model, pair, sign), t, opts);
    return out;
}

ResponseTable tabulate_responses(const CouplingModel& model, const OscillatorPair& pair,
                                 double h, std::size_t n, const InverseLaplaceOptions& opts) {
    ResponseTable table;
    table.eta_p.assign(n, 0.0);
    table.xi_p.assign(n, 0.0);
    table.eta_m.assign(n, 0.0);
    table.xi_m.assign(n, 0.0);
    if (n == 0) return table;
    table.xi_p[0] = 1.0;
    table.xi_m[0] = 1.0;
    for (std::size_t i = 1; i < n; ++i) {
        const double t = h * static_cast<double>(i);
        const ResponseValue p = response_eta_xi(model, pair, +1, t, opts);
        const ResponseValue m = response_eta_xi(model, pair, -1, t, opts);
        table.eta_p[i] = p.eta;
        table.xi_p[i] = p.xi;
        table.eta_m[i] = m.eta;
        table.xi_m[i] = m.xi;
    }
    return table;
}

Trajectory solve_modes_laplace(const CouplingModel& model, const OscillatorPair& pair,
                               const std::vector<double>* noise_r,
                               const std::vector<double>* noise_z, const SolverConfig& cfg,
                               const InverseLaplaceOptions& opts) {
    model.validate();
    pair.validate();
    cfg.validate();
    const std::size_t n = cfg.n_steps();
    if ((noise_r && noise_r->size() < n) || (noise_z && noise_z->size() < n))
        throw std::invalid_argument("solve_modes_laplace: noise series too short");
    const double h = cfg.h;

    ResponseTable resp = tabulate_responses(model, pair, h, n, opts);

    const double r0 = 0.5 * (cfg.ic.x1 + cfg.ic.x2);
    const double vr0 = 0.5 * (cfg.ic.v1 + cfg.ic.v2);
    const double z0 = cfg.ic.x2 - cfg.ic.x1;
    const double vz0 = cfg.ic.v2 - cfg.ic.v1;

    auto build = [&](const std::vector<double>& eta, const std::vector<double>& xi,
                     const std::vector<double>* f, double q0, double p0) {
        std::vector<double> q(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            double val = xi[i] * q0 + eta[i] * p0;
            if (f) {
                // int_0^t eta(t') F(t - t') dt', trapezoid (eta[0] = 0)
                double conv = 0.5 * eta[i] * (*f)[0];
                for (std::size_t m = 1; m < i; ++m) conv += eta[m] * (*f)[i - m];
                val += h * conv;
            }
            q[i] = val;
        }
        return q;
    };

    Trajectory traj;
    traj.h = h;
    traj.solver_tag = "modes_laplace";
    traj.R = build(resp.eta_p, resp.xi_p, noise_r, r0, vr0);
    traj.Z = build(resp.eta_m, resp.xi_m, noise_z, z0, vz0);
    traj.fill_xy_from_modes();

    // velocities by second-order finite differences of the reconstruction
    auto fd_velocity = [&](const std::vector<double>& q) {
        std::vector<double> v(n, 0.0);
        if (n >= 3) {
            v[0] = (-3.0 * q[0] + 4.0 * q[1] - q[2]) / (2.0 * h);
            v[n - 1] = (3.0 * q[n - 1] - 4.0 * q[n - 2] + q[n - 3]) / (2.0 * h);
            for (std::size_t i = 1; i + 1 < n; ++i) v[i] = (q[i + 1] - q[i - 1]) / (2.0 * h);
        }
        return v;
    };
    auto vr = fd_velocity(traj.R);
    auto vz = fd_velocity(traj.Z);
    traj.v1.resize(n);
    traj.v2.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        traj.v1[i] = vr[i] - 0.5 * vz[i];
        traj.v2[i] = vr[i] + 0.5 * vz[i];
    }
    if (noise_r && noise_z) {
        traj.f1.resize(n);
        traj.f2.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            traj.f1[i] = (*noise_r)[i] - 0.5 * (*noise_z)[i];
            traj.f2[i] = (*noise_r)[i] + 0.5 * (*noise_z)[i];
        }
    }
    return traj;
}

std::pair<std::vector<double>, std::vector<double>> weak_coupling_solution(
    double gamma, double omega0, double tau0, const std::vector<double>& f1,
    const std::vector<double>& f2, double h) {
    if (f1.size() != f2.size()) throw std::invalid_argument("weak_coupling_solution: grids differ");
    if (!(h > 0.0)) throw std::invalid_argument("weak_coupling_solution: h must be > 0");
    const std::size_t n = f1.size();

    std::vector<double> G(n), Gd(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = h * static_cast<double>(i);
        G[i] = greens_function(gamma, omega0, t);
        Gd[i] = greens_function_dot(gamma, omega0, t);
    }

    auto trap_conv = [&](const std::vector<double>& k, const std::vector<double>& f) {
        std::vector<double> out(n, 0.0);
        for (std::size_t i = 1; i < n; ++i) {
            double acc = 0.5 * (k[0] * f[i] + k[i] * f[0]);
            for (std::size_t m = 1; m < i; ++m) acc += k[m] * f[i - m];
            out[i] = h * acc;
        }
        return out;
    };

    // zeroth-order velocities w_j = d/dt (G * f_j) = Gdot * f_j (G(0) = 0)
    auto w1 = trap_conv(Gd, f1);
    auto w2 = trap_conv(Gd, f2);

    // delayed copies w_j(t - tau0), linear interpolation on the grid
    auto delayed = [&](const std::vector<double>& w) {
        std::vector<double> out(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double u = h * static_cast<double>(i) - tau0;
            if (u < 0.0) continue;
            const double pos = u / h;
            std::size_t m = static_cast<std::size_t>(pos);
            if (m + 1 >= n) m = n - 2;
            const double th = pos - static_cast<double>(m);
            out[i] = (1.0 - th) * w[m] + th * w[m + 1];
        }
        return out;
    };
    auto w1d = delayed(w1);
    auto w2d = delayed(w2);

    auto x1_first = trap_conv(G, f1);
    auto x2_first = trap_conv(G, f2);
    auto x1_corr = trap_conv(G, w2d);
    auto x2_corr = trap_conv(G, w1d);

    std::vector<double> x1(n), x2(n);
    for (std::size_t i = 0; i < n; ++i) {
        x1[i] = x1_first[i] - 0.5 * gamma * x1_corr[i];
        x2[i] = x2_first[i] - 0.5 * gamma * x2_corr[i];
    }
    return {std::move(x1), std::move(x2)};
}

} // namespace bathlab
