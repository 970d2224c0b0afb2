#include <cmath>

#include "doctest.h"

#include "bathlab/gle.hpp"

using namespace bathlab;

namespace {

const CouplingModel kExp = CouplingModel::exponential_cutoff(1.0, 1.0, 1.0);

OscillatorPair make_pair(double d) {
    OscillatorPair p;
    p.omega0 = 1.0;
    p.d = d;
    return p;
}

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

} // namespace

TEST_CASE("full solver: zero coupling is a free oscillator to 1e-6") {
    const CouplingModel off = CouplingModel::exponential_cutoff(0.0, 1.0, 1.0);
    SolverConfig cfg;
    cfg.h = 2e-4;
    cfg.t_end = 20.0 * M_PI;
    cfg.ic = {0.5, 0.0, 0.0, 0.0};
    const Trajectory traj = integrate_full(off, make_pair(2.0), nullptr, cfg);
    double worst = 0.0;
    for (std::size_t i = 0; i < traj.size(); i += 41)
        worst = std::max(worst, std::abs(traj.x1[i] - 0.5 * std::cos(traj.t(i))));
    CHECK(worst < 1e-6 * 0.5);
}

TEST_CASE("frozen test: drift cancels the induced force exactly") {
    // zero initial data, zero temperature: nothing may move
    SolverConfig cfg;
    cfg.h = 2e-3;
    cfg.t_end = 10.0;
    const Trajectory traj = integrate_full(kExp, make_pair(1.5), nullptr, cfg);
    for (std::size_t i = 0; i < traj.size(); i += 97) {
        CHECK(std::abs(traj.x1[i]) < 1e-14);
        CHECK(std::abs(traj.x2[i]) < 1e-14);
    }
}

TEST_CASE("small amplitudes reproduce the localized solution") {
    // nu0 * a = 1e-3
    const double a = 1e-3;
    ThermalState th;
    th.kT = 1e-8; // noise displacement well below the amplitude scale
    th.mode = ThermalMode::Classical;
    ModeGrid grid;
    grid.nu_max = 8.0;
    grid.n_modes = 256;
    const BathRealization bath = sample_bath(kExp, th, grid, 13);

    SolverConfig cfg;
    cfg.h = 2e-3;
    cfg.t_end = 20.0;
    cfg.ic = {a, 0.0, -0.5 * a, 0.0};
    const std::size_t n = cfg.n_steps();
    const Trajectory full = integrate_full(kExp, make_pair(2.0), &bath, cfg);
    const NoisePair noise = noise_series(bath, 2.0, 0.0, cfg.h, n);
    const Trajectory loc = integrate_localized(kExp, make_pair(2.0), &noise, cfg);
    const double dev = std::max(sup_diff(full.x1, loc.x1), sup_diff(full.x2, loc.x2));
    CHECK(dev < 1e-3 * a);
}

TEST_CASE("full solver rejects families without closed-form position kernels") {
    SolverConfig cfg;
    cfg.h = 0.01;
    cfg.t_end = 1.0;
    const CouplingModel drude = CouplingModel::drude(0.1, 10.0, 1.0);
    CHECK_THROWS_AS(integrate_full(drude, make_pair(1.0), nullptr, cfg),
                    std::invalid_argument);
}

TEST_CASE("explicit mass convention rescales force terms consistently") {
    // with M = 1 both conventions must coincide exactly
    SolverConfig unit;
    unit.h = 2e-3;
    unit.t_end = 5.0;
    unit.ic = {0.01, 0.0, 0.0, 0.0};
    SolverConfig explicit_m = unit;
    explicit_m.mass_convention = MassConvention::ExplicitM;
    OscillatorPair pair = make_pair(2.0);
    pair.mass = 1.0;
    const Trajectory tu = integrate_full(kExp, pair, nullptr, unit);
    const Trajectory tm = integrate_full(kExp, pair, nullptr, explicit_m);
    CHECK(sup_diff(tu.x1, tm.x1) == 0.0);

    // heavier oscillators feel a weaker induced acceleration
    pair.mass = 4.0;
    SolverConfig kicked = explicit_m;
    kicked.ic = {0.05, 0.0, 0.0, 0.0};
    const Trajectory heavy = integrate_full(kExp, pair, nullptr, kicked);
    pair.mass = 1.0;
    const Trajectory light = integrate_full(kExp, pair, nullptr, kicked);
    CHECK(sup_diff(heavy.x1, light.x1) > 0.0);
}
