// RK4 method-of-steps integrator for the Ohmic delay equations
//   xdd_i + omega0^2 x_i + (gamma/2) xd_i = f_i(t) - (gamma/2) xd_j(t - tau0).

#include <cmath>

#include "bathlab/gle.hpp"

namespace bathlab {

namespace {

double hermite_v(const std::vector<double>& v, const std::vector<double>& a, double h,
                 double u, std::size_t complete) {
    const double pos = u / h;
    std::size_t m = static_cast<std::size_t>(pos);
    if (m >= complete) m = complete - 1;
    const double th = pos - static_cast<double>(m);
    if (th == 0.0) return v[m];
    const double th2 = th * th, th3 = th2 * th;
    return (2.0 * th3 - 3.0 * th2 + 1.0) * v[m] + (th3 - 2.0 * th2 + th) * h * a[m] +
           (-2.0 * th3 + 3.0 * th2) * v[m + 1] + (th3 - th2) * h * a[m + 1];
}

} // namespace

Trajectory integrate_ohmic_dde(double gamma, double u0, const OscillatorPair& pair,
                               const NoisePair* noise, const SolverConfig& cfg,
                               const DdeHistory& history) {
    pair.validate();
    cfg.validate();
    if (gamma < 0.0) throw std::invalid_argument("integrate_ohmic_dde: gamma must be >= 0");
    if (!(u0 > 0.0)) throw std::invalid_argument("integrate_ohmic_dde: u0 must be > 0");
    const double tau0 = pair.d / u0;
    const double h = cfg.h;
    if (tau0 > 0.0 && h > tau0 / 10.0 + 1e-12 * tau0)
        throw SolverError("integrate_ohmic_dde: step size must satisfy h <= tau0 / 10");
    const std::size_t n = cfg.n_steps();
    if (noise) {
        if (std::abs(noise->h - 0.5 * h) > 1e-12 * h || noise->t0 != 0.0)
            throw std::invalid_argument(
                "integrate_ohmic_dde: noise must be sampled at half-step spacing h/2");
        if (noise->f1.size() < 2 * n - 1 || noise->f2.size() < 2 * n - 1)
            throw std::invalid_argument("integrate_ohmic_dde: noise series too short");
    }

    const double w0sq = pair.omega0 * pair.omega0;
    const double half_gamma = 0.5 * gamma;

    Trajectory traj;
    traj.h = h;
    traj.solver_tag = "ohmic_dde";
    traj.x1.assign(n, 0.0);
    traj.v1.assign(n, 0.0);
    traj.x2.assign(n, 0.0);
    traj.v2.assign(n, 0.0);
    std::vector<double> a1(n, 0.0), a2(n, 0.0);
    traj.x1[0] = cfg.ic.x1;
    traj.v1[0] = cfg.ic.v1;
    traj.x2[0] = cfg.ic.x2;
    traj.v2[0] = cfg.ic.v2;

    auto history_v = [&](double t, int which) -> double {
        if (history) {
            auto s = history(t);
            return which == 1 ? s[1] : s[3];
        }
        return 0.0; // default history: constant positions, at rest
    };

    // delayed velocity of oscillator `which` at time u = t - tau0;
    // `complete` = number of fully computed steps (nodes 0..complete valid)
    auto delayed_v = [&](double t, int which, std::size_t complete) -> double {
        if (tau0 == 0.0)
            return 0.0; // handled as instantaneous coupling in the RHS below
        const double u = t - tau0;
        if (u < 0.0) return history_v(u, which);
        const auto& v = (which == 1) ? traj.v1 : traj.v2;
        const auto& a = (which == 1) ? a1 : a2;
        return hermite_v(v, a, h, u, complete);
    };

    auto noise_at = [&](int which, std::size_t half_idx) -> double {
        if (!noise) return 0.0;
        return which == 1 ? noise->f1[half_idx] : noise->f2[half_idx];
    };

    // RHS at stage time t = (step + c/2) h, half_idx = 2*step + c, c in {0,1,2}
    struct State {
        double x1, v1, x2, v2;
    };
    auto rhs = [&](const State& s, double t, std::size_t half_idx, std::size_t complete) {
        State d;
        d.x1 = s.v1;
        d.x2 = s.v2;
        double cross1, cross2;
        if (tau0 == 0.0) {
            cross1 = s.v2;
            cross2 = s.v1;
        } else {
            cross1 = delayed_v(t, 2, complete);
            cross2 = delayed_v(t, 1, complete);
        }
        d.v1 = noise_at(1, half_idx) - w0sq * s.x1 - half_gamma * s.v1 - half_gamma * cross1;
        d.v2 = noise_at(2, half_idx) - w0sq * s.x2 - half_gamma * s.v2 - half_gamma * cross2;
        return d;
    };

    {
        State s0{traj.x1[0], traj.v1[0], traj.x2[0], traj.v2[0]};
        State d0 = rhs(s0, 0.0, 0, 0);
        a1[0] = d0.v1;
        a2[0] = d0.v2;
    }
    const double e0 = 0.5 * (traj.v1[0] * traj.v1[0] + traj.v2[0] * traj.v2[0]) +
                      0.5 * w0sq * (traj.x1[0] * traj.x1[0] + traj.x2[0] * traj.x2[0]) +
                      cfg.energy_guard_scale + 1e-300;

    for (std::size_t step = 0; step + 1 < n; ++step) {
        const double t = h * static_cast<double>(step);
        const State s{traj.x1[step], traj.v1[step], traj.x2[step], traj.v2[step]};
        const State k1 = rhs(s, t, 2 * step, step);
        const State s2{s.x1 + 0.5 * h * k1.x1, s.v1 + 0.5 * h * k1.v1, s.x2 + 0.5 * h * k1.x2,
                       s.v2 + 0.5 * h * k1.v2};
        const State k2 = rhs(s2, t + 0.5 * h, 2 * step + 1, step);
        const State s3{s.x1 + 0.5 * h * k2.x1, s.v1 + 0.5 * h * k2.v1, s.x2 + 0.5 * h * k2.x2,
                       s.v2 + 0.5 * h * k2.v2};
        const State k3 = rhs(s3, t + 0.5 * h, 2 * step + 1, step);
        const State s4{s.x1 + h * k3.x1, s.v1 + h * k3.v1, s.x2 + h * k3.x2,
                       s.v2 + h * k3.v2};
        const State k4 = rhs(s4, t + h, 2 * step + 2, step);

        const std::size_t np = step + 1;
        traj.x1[np] = s.x1 + h / 6.0 * (k1.x1 + 2.0 * k2.x1 + 2.0 * k3.x1 + k4.x1);
        traj.v1[np] = s.v1 + h / 6.0 * (k1.v1 + 2.0 * k2.v1 + 2.0 * k3.v1 + k4.v1);
        traj.x2[np] = s.x2 + h / 6.0 * (k1.x2 + 2.0 * k2.x2 + 2.0 * k3.x2 + k4.x2);
        traj.v2[np] = s.v2 + h / 6.0 * (k1.v2 + 2.0 * k2.v2 + 2.0 * k3.v2 + k4.v2);

        const State snew{traj.x1[np], traj.v1[np], traj.x2[np], traj.v2[np]};
        const State dn = rhs(snew, t + h, 2 * np, np);
        a1[np] = dn.v1;
        a2[np] = dn.v2;

        if ((np & 63u) == 0) {
            const double e = 0.5 * (traj.v1[np] * traj.v1[np] + traj.v2[np] * traj.v2[np]) +
                             0.5 * w0sq * (traj.x1[np] * traj.x1[np] + traj.x2[np] * traj.x2[np]);
            if (e > cfg.energy_guard_factor * e0)
                throw SolverError("integrate_ohmic_dde unstable at t = " +
                                  std::to_string(t + h));
        }
    }

    traj.fill_modes_from_xy();
    if (noise) {
        traj.f1.resize(n);
        traj.f2.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            traj.f1[i] = noise->f1[2 * i];
            traj.f2[i] = noise->f2[2 * i];
        }
    }
    return traj;
}

} // namespace bathlab
