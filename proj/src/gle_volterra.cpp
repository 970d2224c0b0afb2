#include <algorithm>
#include <cmath>

#include "bathlab/gle.hpp"

namespace bathlab {

void Trajectory::fill_modes_from_xy() {
    const std::size_t n = x1.size();
    R.resize(n);
    Z.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        R[i] = 0.5 * (x1[i] + x2[i]);
        Z[i] = x2[i] - x1[i];
    }
}

void Trajectory::fill_xy_from_modes() {
    const std::size_t n = R.size();
    x1.resize(n);
    x2.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        x1[i] = R[i] - 0.5 * Z[i];
        x2[i] = R[i] + 0.5 * Z[i];
    }
}

std::size_t SolverConfig::n_steps() const {
    return static_cast<std::size_t>(std::llround(t_end / h)) + 1;
}

void SolverConfig::validate() const {
    if (!(h > 0.0)) throw std::invalid_argument("SolverConfig: h must be > 0");
    if (!(t_end >= h)) throw std::invalid_argument("SolverConfig: t_end must be >= h");
    if (memory_window < 0.0) throw std::invalid_argument("SolverConfig: negative memory window");
    if (!(energy_guard_factor > 1.0))
        throw std::invalid_argument("SolverConfig: energy_guard_factor must exceed 1");
}

double align_step_to_delay(double h, double tau0) {
    if (tau0 <= 0.0) return h;
    const double k = std::ceil(tau0 / h - 1e-12);
    return tau0 / k;
}

namespace {

// cubic Hermite read of v(u) from nodal values and derivatives
double hermite_velocity(const std::vector<double>& v, const std::vector<double>& a, double h,
                        double u) {
    if (u <= 0.0) return v[0];
    const double pos = u / h;
    std::size_t m = static_cast<std::size_t>(pos);
    if (m + 1 >= v.size()) m = v.size() - 2;
    const double th = pos - static_cast<double>(m);
    if (th == 0.0) return v[m];
    const double th2 = th * th;
    const double th3 = th2 * th;
    return (2.0 * th3 - 3.0 * th2 + 1.0) * v[m] + (th3 - 2.0 * th2 + th) * h * a[m] +
           (-2.0 * th3 + 3.0 * th2) * v[m + 1] + (th3 - th2) * h * a[m + 1];
}

struct ChannelDeltas {
    double instant = 0.0;                 // summed weight of delta(t) terms
    std::vector<DeltaTerm> delayed;       // strictly positive delays
};

// Linear Volterra stepper for N coupled channels (N = 1 or 2):
//   xdd_i + w0sq x_i + sum_j [ int K_ij xd_j + instant_ij/2 xd_j(t)
//                              + sum delayed_ij xd_j(t - tau) ] = force_i(t)
// Trapezoidal memory convolution, exact linear corrector solve.
class VolterraStepper {
public:
    std::size_t n = 0;
    double h = 0.0;
    double w0sq = 1.0;
    std::size_t channels = 1;
    // K_tab[i][j] has n entries K_ij(m h); empty vector = zero kernel
    std::vector<std::vector<std::vector<double>>> K_tab;
    std::vector<std::vector<ChannelDeltas>> deltas;
    std::vector<const std::vector<double>*> force; // per channel; nullptr = zero
    std::size_t window_steps = 0;                  // 0 = full history
    double guard_factor = 1e6;
    double guard_scale = 0.0;

    std::vector<std::vector<double>> x, v, a;

    void run(const std::array<double, 4>& ic) {
        x.assign(channels, std::vector<double>(n, 0.0));
        v.assign(channels, std::vector<double>(n, 0.0));
        a.assign(channels, std::vector<double>(n, 0.0));
        for (std::size_t i = 0; i < channels; ++i) {
            x[i][0] = ic[2 * i];
            v[i][0] = ic[2 * i + 1];
        }

        // corrector matrix (I + (h/2) beta), beta_ij = (h/2) K_ij(0) + instant_ij / 2
        double beta[2][2] = {{0, 0}, {0, 0}};
        for (std::size_t i = 0; i < channels; ++i)
            for (std::size_t j = 0; j < channels; ++j) {
                double k0 = K_tab[i][j].empty() ? 0.0 : K_tab[i][j][0];
                beta[i][j] = 0.5 * h * k0 + 0.5 * deltas[i][j].instant;
            }
        double m00 = 1.0 + 0.5 * h * beta[0][0];
        double m01 = channels == 2 ? 0.5 * h * beta[0][1] : 0.0;
        double m10 = channels == 2 ? 0.5 * h * beta[1][0] : 0.0;
        double m11 = channels == 2 ? 1.0 + 0.5 * h * beta[1][1] : 1.0;
        const double det = m00 * m11 - m01 * m10;

        // initial acceleration (memory integral over [0,0] vanishes; the
        // instantaneous delta friction acts from t = 0+ as in the Ohmic form)
        for (std::size_t i = 0; i < channels; ++i) {
            double acc = force_at(i, 0) - w0sq * x[i][0];
            for (std::size_t j = 0; j < channels; ++j)
                acc -= 0.5 * deltas[i][j].instant * v[j][0];
            a[i][0] = acc;
        }

        const double e0 = energy(0) + guard_scale + 1e-300;

        for (std::size_t step = 0; step + 1 < n; ++step) {
            const std::size_t np = step + 1;
            double rhs[2] = {0.0, 0.0};
            for (std::size_t i = 0; i < channels; ++i) {
                x[i][np] = x[i][step] + h * v[i][step] + 0.5 * h * h * a[i][step];
            }
            for (std::size_t i = 0; i < channels; ++i) {
                double hist = 0.0;
                for (std::size_t j = 0; j < channels; ++j) {
                    const auto& K = K_tab[i][j];
                    if (!K.empty()) {
                        const std::size_t m_lo =
                            (window_steps > 0 && np > window_steps) ? np - window_steps : 0;
                        double sum = 0.0;
                        const double* kv = K.data();
                        const double* vv = v[j].data();
                        for (std::size_t m = m_lo; m <= step; ++m)
                            sum += kv[np - m] * vv[m];
                        if (m_lo == 0) sum -= 0.5 * K[np] * v[j][0];
                        hist += h * sum;
                    }
                    for (const auto& dt : deltas[i][j].delayed) {
                        const double u = h * static_cast<double>(np) - dt.delay;
                        if (u >= 0.0) hist += dt.weight * hermite_velocity(v[j], a[j], h, u);
                    }
                }
                rhs[i] = v[i][step] + 0.5 * h * a[i][step] +
                         0.5 * h * (force_at(i, np) - w0sq * x[i][np] - hist);
                hist_cache_[i] = hist;
            }
            if (channels == 1) {
                v[0][np] = rhs[0] / m00;
            } else {
                v[0][np] = (rhs[0] * m11 - rhs[1] * m01) / det;
                v[1][np] = (rhs[1] * m00 - rhs[0] * m10) / det;
            }
            for (std::size_t i = 0; i < channels; ++i) {
                double acc = force_at(i, np) - w0sq * x[i][np] - hist_cache_[i];
                for (std::size_t j = 0; j < channels; ++j) acc -= beta[i][j] * v[j][np];
                a[i][np] = acc;
            }
            if ((np & 63u) == 0 && energy(np) > guard_factor * e0) {
                throw SolverError("volterra stepper unstable: energy grew beyond bound at t = " +
                                  std::to_string(h * static_cast<double>(np)));
            }
        }
    }

private:
    double hist_cache_[2] = {0.0, 0.0};

    double force_at(std::size_t i, std::size_t idx) const {
        return force[i] ? (*force[i])[idx] : 0.0;
    }

    double energy(std::size_t idx) const {
        double e = 0.0;
        for (std::size_t i = 0; i < channels; ++i)
            e += 0.5 * v[i][idx] * v[i][idx] + 0.5 * w0sq * x[i][idx] * x[i][idx];
        return e;
    }
};

std::vector<double> tabulate_smooth(const CouplingModel& model, double h, std::size_t n,
                                    bool cross, double d) {
    if (model.family == CouplingFamily::Ohmic) return {};
    if (model.family == CouplingFamily::ExponentialCutoff && model.amplitude == 0.0) return {};
    std::vector<double> out(n + 1);
    for (std::size_t m = 0; m <= n; ++m) {
        const double t = h * static_cast<double>(m);
        out[m] = cross ? chi_d_smooth(model, t, d) : chi_smooth(model, t);
    }
    return out;
}

ChannelDeltas delta_terms(const CouplingModel& model, bool cross, double d, double h) {
    ChannelDeltas out;
    if (model.family != CouplingFamily::Ohmic) return out;
    if (!cross) {
        out.instant = model.gamma;
    } else {
        const double tau = d / model.u0;
        if (tau == 0.0) {
            out.instant = 0.5 * model.gamma; // d = 0: cross delta collapses onto t' = t
        } else {
            if (tau < h)
                throw SolverError("delayed delta kernel needs tau0 >= h (refine the step)");
            out.delayed.push_back({0.5 * model.gamma, tau});
        }
    }
    return out;
}

std::size_t window_steps_of(const SolverConfig& cfg) {
    if (cfg.memory_window <= 0.0) return 0;
    return static_cast<std::size_t>(std::ceil(cfg.memory_window / cfg.h));
}

void check_noise_grid(const NoisePair* noise, const SolverConfig& cfg, std::size_t n) {
    if (!noise) return;
    if (std::abs(noise->h - cfg.h) > 1e-12 * cfg.h || noise->t0 != 0.0)
        throw std::invalid_argument("noise series grid does not match the solver grid");
    if (noise->f1.size() < n || noise->f2.size() < n)
        throw std::invalid_argument("noise series shorter than the trajectory grid");
}

} // namespace

Trajectory integrate_localized(const CouplingModel& model, const OscillatorPair& pair,
                               const NoisePair* noise, const SolverConfig& cfg) {
    model.validate();
    pair.validate();
    cfg.validate();
    const std::size_t n = cfg.n_steps();
    check_noise_grid(noise, cfg, n);

    VolterraStepper engine;
    engine.n = n;
    engine.h = cfg.h;
    engine.w0sq = pair.omega0 * pair.omega0;
    engine.channels = 2;
    auto self_tab = tabulate_smooth(model, cfg.h, n, false, 0.0);
    auto cross_tab = tabulate_smooth(model, cfg.h, n, true, pair.d);
    engine.K_tab = {{self_tab, cross_tab}, {cross_tab, self_tab}};
    auto self_del = delta_terms(model, false, 0.0, cfg.h);
    auto cross_del = delta_terms(model, true, pair.d, cfg.h);
    engine.deltas = {{self_del, cross_del}, {cross_del, self_del}};
    engine.force = {noise ? &noise->f1 : nullptr, noise ? &noise->f2 : nullptr};
    engine.window_steps = window_steps_of(cfg);
    engine.guard_factor = cfg.energy_guard_factor;
    engine.guard_scale = cfg.energy_guard_scale;
    engine.run({cfg.ic.x1, cfg.ic.v1, cfg.ic.x2, cfg.ic.v2});

    Trajectory traj;
    traj.h = cfg.h;
    traj.solver_tag = "localized";
    traj.x1 = std::move(engine.x[0]);
    traj.v1 = std::move(engine.v[0]);
    traj.x2 = std::move(engine.x[1]);
    traj.v2 = std::move(engine.v[1]);
    traj.fill_modes_from_xy();
    if (noise) {
        traj.f1.assign(noise->f1.begin(), noise->f1.begin() + static_cast<long>(n));
        traj.f2.assign(noise->f2.begin(), noise->f2.begin() + static_cast<long>(n));
    }
    return traj;
}

Trajectory integrate_modes(const CouplingModel& model, const OscillatorPair& pair,
                           const std::vector<double>* noise_r,
                           const std::vector<double>* noise_z, const SolverConfig& cfg) {
    model.validate();
    pair.validate();
    cfg.validate();
    const std::size_t n = cfg.n_steps();
    if ((noise_r && noise_r->size() < n) || (noise_z && noise_z->size() < n))
        throw std::invalid_argument("mode noise series shorter than the trajectory grid");

    auto self_tab = tabulate_smooth(model, cfg.h, n, false, 0.0);
    auto cross_tab = tabulate_smooth(model, cfg.h, n, true, pair.d);
    std::vector<double> kr, kz;
    if (!self_tab.empty()) {
        kr.resize(self_tab.size());
        kz.resize(self_tab.size());
        for (std::size_t m = 0; m < self_tab.size(); ++m) {
            kr[m] = self_tab[m] + cross_tab[m];
            kz[m] = self_tab[m] - cross_tab[m];
        }
    }
    auto self_del = delta_terms(model, false, 0.0, cfg.h);
    auto cross_del = delta_terms(model, true, pair.d, cfg.h);
    ChannelDeltas dr = self_del, dz = self_del;
    dr.instant += cross_del.instant;
    dz.instant -= cross_del.instant;
    for (const auto& term : cross_del.delayed) {
        dr.delayed.push_back(term);
        dz.delayed.push_back({-term.weight, term.delay});
    }

    auto run_channel = [&](const std::vector<double>& ktab, const ChannelDeltas& del,
                           const std::vector<double>* f, double q0, double p0) {
        VolterraStepper engine;
        engine.n = n;
        engine.h = cfg.h;
        engine.w0sq = pair.omega0 * pair.omega0;
        engine.channels = 1;
        engine.K_tab = {{ktab}};
        engine.deltas = {{del}};
        engine.force = {f};
        engine.window_steps = window_steps_of(cfg);
        engine.guard_factor = cfg.energy_guard_factor;
        engine.guard_scale = cfg.energy_guard_scale;
        engine.run({q0, p0, 0.0, 0.0});
        return std::make_pair(std::move(engine.x[0]), std::move(engine.v[0]));
    };

    const double r0 = 0.5 * (cfg.ic.x1 + cfg.ic.x2);
    const double vr0 = 0.5 * (cfg.ic.v1 + cfg.ic.v2);
    const double z0 = cfg.ic.x2 - cfg.ic.x1;
    const double vz0 = cfg.ic.v2 - cfg.ic.v1;
    auto [Rx, Rv] = run_channel(kr, dr, noise_r, r0, vr0);
    auto [Zx, Zv] = run_channel(kz, dz, noise_z, z0, vz0);

    Trajectory traj;
    traj.h = cfg.h;
    traj.solver_tag = "modes";
    traj.R = std::move(Rx);
    traj.Z = std::move(Zx);
    traj.fill_xy_from_modes();
    traj.v1.resize(n);
    traj.v2.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        traj.v1[i] = Rv[i] - 0.5 * Zv[i];
        traj.v2[i] = Rv[i] + 0.5 * Zv[i];
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

Trajectory integrate_full(const CouplingModel& model, const OscillatorPair& pair,
                          const BathRealization* bath, const SolverConfig& cfg) {
    model.validate();
    pair.validate();
    cfg.validate();
    if (model.family != CouplingFamily::ExponentialCutoff)
        throw std::invalid_argument(
            "integrate_full: closed-form position kernels require the exponential-cutoff "
            "family");
    const std::size_t n = cfg.n_steps();
    const double h = cfg.h;
    const double w0sq = pair.omega0 * pair.omega0;
    const double d = pair.d;
    const double inv_mass =
        cfg.mass_convention == MassConvention::ExplicitM ? 1.0 / pair.mass : 1.0;

    // frozen-phase noise is presampled; dynamic phases are evaluated per step
    NoisePair frozen;
    if (bath && !cfg.dynamic_noise_phase) frozen = noise_series(*bath, d, 0.0, h, n);

    auto dyn_noise = [&](int which, double t, double xpos) {
        if (!bath) return 0.0;
        if (!cfg.dynamic_noise_phase)
            return which == 1 ? frozen.f1[static_cast<std::size_t>(std::llround(t / h))]
                              : frozen.f2[static_cast<std::size_t>(std::llround(t / h))];
        // phases at the instantaneous position: x1 couples at x1, x2 at x2 + d
        const double phase_x = (which == 1) ? xpos : xpos + d;
        double acc = 0.0;
        const std::size_t nm = bath->grid.n_modes;
        for (std::size_t k = 0; k < nm; ++k) {
            const double nu = bath->grid.nu(k);
            const double omega = bath->u0 * nu;
            const double c = std::cos(omega * t), s = std::sin(omega * t);
            const double z = bath->z0[k] * c + bath->q0[k] / omega * s;
            const double y = bath->y0[k] * c + bath->p0[k] / omega * s;
            acc += bath->force_weight[k] * (y * std::sin(nu * phase_x) + z * std::cos(nu * phase_x));
        }
        return -acc;
    };

    Trajectory traj;
    traj.h = h;
    traj.solver_tag = "full";
    traj.x1.assign(n, 0.0);
    traj.v1.assign(n, 0.0);
    traj.x2.assign(n, 0.0);
    traj.v2.assign(n, 0.0);
    auto& x1 = traj.x1;
    auto& v1 = traj.v1;
    auto& x2 = traj.x2;
    auto& v2 = traj.v2;
    std::vector<double> a1(n, 0.0), a2(n, 0.0);
    x1[0] = cfg.ic.x1;
    v1[0] = cfg.ic.v1;
    x2[0] = cfg.ic.x2;
    v2[0] = cfg.ic.v2;

    const double x1_init = x1[0], x2_init = x2[0];
    const bool zero_coupling = model.amplitude == 0.0;

    // generalized force (noise + drift - induced) per unit mass
    auto gen_force = [&](int which, double t, double xa, double xb) {
        // xa = own position, xb = other position
        if (zero_coupling) return 0.0;
        const double u12 = (which == 1) ? xa - xb : xb - xa;
        double drift, dV;
        if (which == 1) {
            drift = induced_drift(model, xa - x1_init) + induced_drift(model, xa - x2_init - d);
            dV = induced_drift(model, u12 - d);
        } else {
            drift = induced_drift(model, xa - x2_init) + induced_drift(model, xa - x1_init + d);
            dV = -induced_drift(model, u12 - d);
        }
        return inv_mass * (dyn_noise(which, t, xa) + drift - dV);
    };

    const std::size_t window =
        cfg.memory_window > 0.0
            ? static_cast<std::size_t>(std::ceil(cfg.memory_window / h))
            : 0;

    const double chi00 = zero_coupling ? 0.0 : chi_smooth(model, 0.0);
    const double e0 = 0.5 * (v1[0] * v1[0] + v2[0] * v2[0]) +
                      0.5 * w0sq * (x1[0] * x1[0] + x2[0] * x2[0]) + cfg.energy_guard_scale +
                      1e-300;

    a1[0] = gen_force(1, 0.0, x1[0], x2[0]) - w0sq * x1[0];
    a2[0] = gen_force(2, 0.0, x2[0], x1[0]) - w0sq * x2[0];

    for (std::size_t step = 0; step + 1 < n; ++step) {
        const std::size_t np = step + 1;
        const double tnp = h * static_cast<double>(np);
        x1[np] = x1[step] + h * v1[step] + 0.5 * h * h * a1[step];
        x2[np] = x2[step] + h * v2[step] + 0.5 * h * h * a2[step];

        double hist1 = 0.0, hist2 = 0.0;
        if (!zero_coupling) {
            const std::size_t m_lo = (window > 0 && np > window) ? np - window : 0;
            for (std::size_t m = m_lo; m <= step; ++m) {
                const double dt = tnp - h * static_cast<double>(m);
                const double wgt = (m == 0 && m_lo == 0) ? 0.5 : 1.0;
                hist1 += wgt * (chi_smooth_shift(model, dt, x1[np] - x1[m]) * v1[m] +
                                chi_smooth_shift(model, dt, x1[np] - x2[m] - d) * v2[m]);
                hist2 += wgt * (chi_smooth_shift(model, dt, x2[np] - x2[m]) * v2[m] +
                                chi_smooth_shift(model, dt, x2[np] - x1[m] + d) * v1[m]);
            }
            hist1 *= h;
            hist2 *= h;
        }
        // endpoint m = np: self argument 0, cross argument x1 - x2 - d at equal times
        const double chi_cross_now =
            zero_coupling ? 0.0 : chi_smooth_shift(model, 0.0, x1[np] - x2[np] - d);
        const double b_self = 0.5 * h * chi00;
        const double b_cross = 0.5 * h * chi_cross_now;

        const double rhs1 = v1[step] + 0.5 * h * a1[step] +
                            0.5 * h * (gen_force(1, tnp, x1[np], x2[np]) - w0sq * x1[np] - hist1);
        const double rhs2 = v2[step] + 0.5 * h * a2[step] +
                            0.5 * h * (gen_force(2, tnp, x2[np], x1[np]) - w0sq * x2[np] - hist2);
        const double m00 = 1.0 + 0.5 * h * b_self;
        const double m01 = 0.5 * h * b_cross;
        const double det = m00 * m00 - m01 * m01;
        v1[np] = (rhs1 * m00 - rhs2 * m01) / det;
        v2[np] = (rhs2 * m00 - rhs1 * m01) / det;
        a1[np] = gen_force(1, tnp, x1[np], x2[np]) - w0sq * x1[np] - hist1 -
                 b_self * v1[np] - b_cross * v2[np];
        a2[np] = gen_force(2, tnp, x2[np], x1[np]) - w0sq * x2[np] - hist2 -
                 b_self * v2[np] - b_cross * v1[np];

        if ((np & 63u) == 0) {
            const double e = 0.5 * (v1[np] * v1[np] + v2[np] * v2[np]) +
                             0.5 * w0sq * (x1[np] * x1[np] + x2[np] * x2[np]);
            if (e > cfg.energy_guard_factor * e0)
                throw SolverError("integrate_full unstable: energy grew beyond bound at t = " +
                                  std::to_string(tnp));
        }
    }

    traj.fill_modes_from_xy();
    if (bath && !cfg.dynamic_noise_phase) {
        traj.f1 = std::move(frozen.f1);
        traj.f2 = std::move(frozen.f2);
        traj.f1.resize(n);
        traj.f2.resize(n);
        traj.seed = bath->seed;
    }
    return traj;
}

} // namespace bathlab
