#include <cmath>

#include "doctest.h"

#include "bathlab/gle.hpp"
#include "bathlab/greens.hpp"
#include "bathlab/rng.hpp"

using namespace bathlab;

namespace {

const CouplingModel kDrude = CouplingModel::drude(0.1, 10.0, 1.0);

OscillatorPair make_pair(double d) {
    OscillatorPair p;
    p.omega0 = 1.0;
    p.d = d;
    return p;
}

NoisePair sampled_noise(const CouplingModel& model, double d, double h, std::size_t n,
                        std::uint64_t seed, double kT = 0.5, double nu_max = 10.0) {
    ThermalState th;
    th.kT = kT;
    th.mode = ThermalMode::Classical;
    ModeGrid grid;
    grid.nu_max = nu_max;
    grid.n_modes = 512;
    const BathRealization bath = sample_bath(model, th, grid, seed);
    return noise_series(bath, d, 0.0, h, n);
}

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

// single-oscillator GLE reference: trapezoidal memory + the same corrector,
// written independently of the two-channel engine
std::vector<double> single_gle_reference(const CouplingModel& model, double omega0, double h,
                                         std::size_t n, double x0, double v0) {
    std::vector<double> K(n + 1);
    for (std::size_t m = 0; m <= n; ++m) K[m] = chi_smooth(model, h * static_cast<double>(m));
    std::vector<double> x(n), v(n), a(n);
    x[0] = x0;
    v[0] = v0;
    a[0] = -omega0 * omega0 * x[0];
    const double beta = 0.5 * h * K[0];
    for (std::size_t s = 0; s + 1 < n; ++s) {
        const std::size_t np = s + 1;
        x[np] = x[s] + h * v[s] + 0.5 * h * h * a[s];
        double hist = 0.0;
        for (std::size_t m = 0; m <= s; ++m) {
            const double w = (m == 0) ? 0.5 : 1.0;
            hist += w * K[np - m] * v[m];
        }
        hist *= h;
        const double rhs = v[s] + 0.5 * h * a[s] + 0.5 * h * (-omega0 * omega0 * x[np] - hist);
        v[np] = rhs / (1.0 + 0.5 * h * beta);
        a[np] = -omega0 * omega0 * x[np] - hist - beta * v[np];
    }
    return x;
}

} // namespace

TEST_CASE("zero coupling: free oscillator to 1e-6 over ten periods") {
    const CouplingModel off = CouplingModel::exponential_cutoff(0.0, 1.0, 1.0);
    SolverConfig cfg;
    cfg.h = 2e-4;
    cfg.t_end = 20.0 * M_PI;
    cfg.ic = {0.7, 0.0, 0.0, 0.0};
    const Trajectory traj = integrate_localized(off, make_pair(2.0), nullptr, cfg);
    double worst = 0.0;
    for (std::size_t i = 0; i < traj.size(); i += 37) {
        worst = std::max(worst, std::abs(traj.x1[i] - 0.7 * std::cos(traj.t(i))));
    }
    CHECK(worst < 1e-6 * 0.7);
    for (std::size_t i = 0; i < traj.size(); i += 997) CHECK(traj.x2[i] == 0.0);
}

TEST_CASE("localized and mode solvers agree to 1e-8 on identical noise") {
    SolverConfig cfg;
    cfg.h = 2e-3;
    cfg.t_end = 20.0;
    cfg.ic = {0.1, 0.0, -0.05, 0.02};
    const std::size_t n = cfg.n_steps();
    const NoisePair noise = sampled_noise(kDrude, 2.0, cfg.h, n, 111);
    auto [fr, fz] = mode_noises(noise.f1, noise.f2);

    const Trajectory loc = integrate_localized(kDrude, make_pair(2.0), &noise, cfg);
    const Trajectory mod = integrate_modes(kDrude, make_pair(2.0), &fr, &fz, cfg);
    CHECK(sup_diff(loc.x1, mod.x1) < 1e-8);
    CHECK(sup_diff(loc.x2, mod.x2) < 1e-8);
    CHECK(sup_diff(loc.v1, mod.v1) < 1e-8);

    // trajectory mode representation is consistent
    for (std::size_t i = 0; i < n; i += 311) {
        CHECK(std::abs(loc.R[i] - 0.5 * (loc.x1[i] + loc.x2[i])) < 1e-12);
        CHECK(std::abs(loc.Z[i] - (loc.x2[i] - loc.x1[i])) < 1e-12);
    }
}

TEST_CASE("far-separated oscillators decouple to the single-oscillator GLE") {
    SolverConfig cfg;
    cfg.h = 2e-3;
    cfg.t_end = 10.0;
    cfg.ic = {0.5, 0.0, -0.3, 0.1};
    const std::size_t n = cfg.n_steps();
    const Trajectory both = integrate_localized(kDrude, make_pair(1e7), nullptr, cfg);
    const auto x1_ref = single_gle_reference(kDrude, 1.0, cfg.h, n, 0.5, 0.0);
    const auto x2_ref = single_gle_reference(kDrude, 1.0, cfg.h, n, -0.3, 0.1);
    CHECK(sup_diff(both.x1, x1_ref) < 1e-8);
    CHECK(sup_diff(both.x2, x2_ref) < 1e-8);
}

TEST_CASE("symmetric initial data never excites the difference mode") {
    SolverConfig cfg;
    cfg.h = 1e-3;
    cfg.t_end = 15.0;
    cfg.ic = {0.4, 0.0, 0.4, 0.0};
    const Trajectory traj = integrate_localized(kDrude, make_pair(1.5), nullptr, cfg);
    double worst = 0.0;
    for (std::size_t i = 0; i < traj.size(); ++i) worst = std::max(worst, std::abs(traj.Z[i]));
    CHECK(worst < 1e-12);
}

TEST_CASE("d = 0 difference mode is an undamped oscillator") {
    SolverConfig cfg;
    cfg.h = 2e-4;
    cfg.t_end = 12.0;
    cfg.ic = {0.0, 0.0, 1.0, 0.0}; // Z(0) = 1
    const Trajectory traj = integrate_modes(kDrude, make_pair(0.0), nullptr, nullptr, cfg);
    double worst = 0.0;
    for (std::size_t i = 0; i < traj.size(); i += 13) {
        worst = std::max(worst, std::abs(traj.Z[i] - std::cos(traj.t(i))));
    }
    CHECK(worst < 2e-6);
}

TEST_CASE("noise-to-trajectory map of the localized solver is linear") {
    SolverConfig cfg;
    cfg.h = 5e-3;
    cfg.t_end = 10.0;
    const std::size_t n = cfg.n_steps();
    const NoisePair na = sampled_noise(kDrude, 2.0, cfg.h, n, 21);
    const NoisePair nb = sampled_noise(kDrude, 2.0, cfg.h, n, 22);
    const double alpha = 0.6, beta = -1.7;
    NoisePair mix;
    mix.t0 = 0.0;
    mix.h = cfg.h;
    mix.f1.resize(n);
    mix.f2.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        mix.f1[i] = alpha * na.f1[i] + beta * nb.f1[i];
        mix.f2[i] = alpha * na.f2[i] + beta * nb.f2[i];
    }
    const OscillatorPair pair = make_pair(2.0);
    const Trajectory ta = integrate_localized(kDrude, pair, &na, cfg);
    const Trajectory tb = integrate_localized(kDrude, pair, &nb, cfg);
    const Trajectory tm = integrate_localized(kDrude, pair, &mix, cfg);
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        worst = std::max(worst,
                         std::abs(tm.x1[i] - alpha * ta.x1[i] - beta * tb.x1[i]));
        worst = std::max(worst,
                         std::abs(tm.x2[i] - alpha * ta.x2[i] - beta * tb.x2[i]));
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("localized solver converges at second order") {
    const OscillatorPair pair = make_pair(1.0);
    SolverConfig fine;
    fine.h = 2.5e-4;
    fine.t_end = 5.0;
    fine.ic = {1.0, 0.0, 0.0, 0.0};
    const Trajectory ref = integrate_localized(kDrude, pair, nullptr, fine);

    auto error_at = [&](double h) {
        SolverConfig cfg = fine;
        cfg.h = h;
        const Trajectory traj = integrate_localized(kDrude, pair, nullptr, cfg);
        const std::size_t stride = static_cast<std::size_t>(std::llround(h / fine.h));
        double worst = 0.0;
        for (std::size_t i = 0; i < traj.size(); ++i)
            worst = std::max(worst, std::abs(traj.x1[i] - ref.x1[i * stride]));
        return worst;
    };
    const double e1 = error_at(4e-3);
    const double e2 = error_at(2e-3);
    const double ratio = e1 / e2;
    CHECK(ratio > 3.2);
    CHECK(ratio < 4.8);
}

TEST_CASE("dissipative mode energy decays monotonically in envelope") {
    SolverConfig cfg;
    cfg.h = 1e-3;
    cfg.t_end = 30.0;
    cfg.ic = {1.0, 0.0, 1.0, 0.0}; // R(0) = 1, Z(0) = 0
    const Trajectory traj = integrate_modes(kDrude, make_pair(2.0), nullptr, nullptr, cfg);
    // compare energy at successive period marks (envelope, not instantaneous)
    const std::size_t period = static_cast<std::size_t>(std::llround(2.0 * M_PI / cfg.h));
    double prev = 1e300;
    for (std::size_t i = 0; i + 1 < traj.size(); i += period) {
        const double vr = 0.5 * (traj.v1[i] + traj.v2[i]);
        const double e = 0.5 * vr * vr + 0.5 * traj.R[i] * traj.R[i];
        CHECK(e <= prev * (1.0 + 1e-9));
        prev = e;
    }
    CHECK(prev < 0.5); // actually dissipated a sizable fraction
}

TEST_CASE("memory window reproduces the full-history Drude run") {
    SolverConfig cfg;
    cfg.h = 2e-3;
    cfg.t_end = 30.0;
    cfg.ic = {0.6, 0.0, -0.2, 0.0};
    const std::size_t n = cfg.n_steps();
    const NoisePair noise = sampled_noise(kDrude, 2.0, cfg.h, n, 77);
    const Trajectory full = integrate_localized(kDrude, make_pair(2.0), &noise, cfg);
    SolverConfig windowed = cfg;
    windowed.memory_window = 6.0; // tail below e^{-40}
    const Trajectory win = integrate_localized(kDrude, make_pair(2.0), &noise, windowed);
    CHECK(sup_diff(full.x1, win.x1) < 1e-10);
    CHECK(sup_diff(full.x2, win.x2) < 1e-10);
}

TEST_CASE("laplace-domain mode solution matches the time-domain mode solver") {
    SolverConfig cfg;
    cfg.h = 1e-3;
    cfg.t_end = 20.0;
    cfg.ic = {0.3, 0.0, -0.1, 0.05};
    const std::size_t n = cfg.n_steps();
    const NoisePair noise = sampled_noise(kDrude, 2.0, cfg.h, n, 501);
    auto [fr, fz] = mode_noises(noise.f1, noise.f2);
    const OscillatorPair pair = make_pair(2.0);
    const Trajectory mod = integrate_modes(kDrude, pair, &fr, &fz, cfg);
    const Trajectory lap = solve_modes_laplace(kDrude, pair, &fr, &fz, cfg);
    CHECK(sup_diff(mod.x1, lap.x1) < 1e-4);
    CHECK(sup_diff(mod.x2, lap.x2) < 1e-4);
}

TEST_CASE("R reconstruction from the response functions (zero-noise)") {
    // R(t) = xi_+(t) R(0) + eta_+(t) Rdot(0)
    const OscillatorPair pair = make_pair(2.0);
    SolverConfig cfg;
    cfg.h = 1e-3;
    cfg.t_end = 20.0;
    cfg.ic = {1.0, 0.1, 1.0, 0.1}; // pure R excitation
    const Trajectory mod = integrate_modes(kDrude, pair, nullptr, nullptr, cfg);
    double worst = 0.0;
    for (double t : {0.5, 2.0, 5.0, 11.0, 19.0}) {
        const ResponseValue r = response_eta_xi(kDrude, pair, +1, t);
        const double want = r.xi * 1.0 + r.eta * 0.1;
        const std::size_t i = static_cast<std::size_t>(std::llround(t / cfg.h));
        worst = std::max(worst, std::abs(mod.R[i] - want));
    }
    CHECK(worst < 1e-4);
}

TEST_CASE("energy guard detects an injected instability") {
    // an absurdly long step on a stiff kernel makes the corrector diverge
    SolverConfig cfg;
    cfg.h = 0.9;
    cfg.t_end = 400.0;
    cfg.ic = {1.0, 0.0, -1.0, 0.0};
    cfg.energy_guard_factor = 100.0;
    const CouplingModel stiff = CouplingModel::drude(25.0, 40.0, 1.0);
    CHECK_THROWS_AS(integrate_localized(stiff, make_pair(0.5), nullptr, cfg), SolverError);
}
