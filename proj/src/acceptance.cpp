#include "bathlab/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "bathlab/analysis.hpp"
#include "bathlab/ensemble.hpp"
#include "bathlab/gle.hpp"
#include "bathlab/greens.hpp"
#include "bathlab/induced.hpp"
#include "bathlab/kernels.hpp"
#include "bathlab/rng.hpp"
#include "bathlab/thermal.hpp"

namespace bathlab {

namespace {

struct Check {
    int index;
    const char* name;
    double budget;
    std::function<std::string(const AcceptanceOptions&, bool&)> run; // returns detail
};

std::string format_rel(double v) {
    std::ostringstream os;
    os << std::scientific << std::setprecision(2) << v;
    return os.str();
}

// strided node-grid copy of a half-step noise series
NoisePair node_noise_from_half(const NoisePair& half, std::size_t n) {
    NoisePair out;
    out.t0 = 0.0;
    out.h = 2.0 * half.h;
    out.f1.resize(n);
    out.f2.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.f1[i] = half.f1[2 * i];
        out.f2[i] = half.f2[2 * i];
    }
    return out;
}

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

// ------------------------------------------------------------------ 1
std::string check_kernel_oracle(const AcceptanceOptions&, bool& pass) {
    double worst = 0.0;
    std::size_t n_pairs = 0;
    const double tol = 1e-6;

    const CouplingModel expc = CouplingModel::exponential_cutoff(1.0, 1.0, 1.0);
    const double abs_floor_exp = 1e-9 * chi_smooth(expc, 0.0);
    for (double d : {0.0, 0.5, 1.1, 2.3, 4.1}) {
        for (int i = 0; i < 12; ++i) {
            const double dt = 5.0 * static_cast<double>(i) / 11.0;
            const bool cross = d > 0.0;
            const double closed = cross ? chi_d_smooth(expc, dt, d) : chi_smooth(expc, dt);
            const double quad = kernel_chi_quadrature(expc, dt, 0.0, cross, d, 1e-12, 1e-9);
            const double err = std::abs(quad - closed) / std::max(std::abs(closed), abs_floor_exp);
            worst = std::max(worst, err);
            ++n_pairs;
        }
    }

    const CouplingModel drude = CouplingModel::drude(0.1, 10.0, 1.0);
    const double abs_floor_dr = 1e-9 * chi_smooth(drude, 0.0);
    for (double d : {0.0, 0.05, 0.12, 0.21, 0.29}) {
        for (int i = 0; i < 10; ++i) {
            const double dt = 0.3 * static_cast<double>(i) / 9.0;
            const bool cross = d > 0.0;
            const double closed = cross ? chi_d_smooth(drude, dt, d) : chi_smooth(drude, dt);
            const double quad = kernel_chi_quadrature(drude, dt, 0.0, cross, d, 1e-12, 1e-9);
            const double err = std::abs(quad - closed) / std::max(std::abs(closed), abs_floor_dr);
            worst = std::max(worst, err);
            ++n_pairs;
        }
    }
    pass = worst < tol && n_pairs >= 100;
    return "max rel err " + format_rel(worst) + " over " + std::to_string(n_pairs) + " pairs";
}

// ------------------------------------------------------------------ 2
std::string check_inversion_round_trip(const AcceptanceOptions&, bool& pass) {
    const double tol = 1e-4;
    double worst = 0.0;

    const CouplingModel drude = CouplingModel::drude(0.1, 10.0, 1.0);
    auto drude_chi = [&](double t) { return chi_smooth(drude, t); };
    const double nu_char_d = drude.nu_char();
    for (int i = 0; i <= 40; ++i) {
        const double nu = 0.1 * nu_char_d * std::pow(100.0, static_cast<double>(i) / 40.0);
        const double got = invert_kernel_to_coupling(drude_chi, 1.0 / drude.omega_d, drude, nu);
        const double want = coupling_strength_sq(drude, nu);
        worst = std::max(worst, std::abs(got - want) / want);
    }

    const CouplingModel ohmic = CouplingModel::ohmic(0.1, 1.0);
    const KernelValue delta = kernel_chi(ohmic, 0.0);
    for (int i = 0; i <= 40; ++i) {
        const double nu = 0.1 * std::pow(100.0, static_cast<double>(i) / 40.0);
        const double got = invert_kernel_to_coupling(delta, ohmic, nu);
        const double want = coupling_strength_sq(ohmic, nu);
        worst = std::max(worst, std::abs(got - want) / want);
    }
    pass = worst < tol;
    return "max rel err " + format_rel(worst) + " over two decades, Drude + Ohmic";
}

// ------------------------------------------------------------------ 3
std::string check_potential_force(const AcceptanceOptions&, bool& pass) {
    const CouplingModel expc = CouplingModel::exponential_cutoff(1.0, 1.0, 1.0);
    const CouplingModel drude = CouplingModel::drude(0.1, 10.0, 1.0);
    const double d = 2.0;

    const double v_at_min = induced_potential(expc, d, d);
    const bool exact_min = v_at_min == -1.0; // -A nu0 / u0^2 exactly as printed
    const bool zero_force = induced_force(expc, d, d) == 0.0 && induced_force(drude, d, d) == 0.0;

    double worst_fd = 0.0;
    const double step = 1e-5;
    for (int i = 0; i < 50; ++i) {
        const double u = d - 8.0 + 16.0 * static_cast<double>(i) / 49.0;
        for (const CouplingModel* m : {&expc, &drude}) {
            const double fd =
                -(induced_potential(*m, u + step, d) - induced_potential(*m, u - step, d)) /
                (2.0 * step);
            const double f = induced_force(*m, u, d);
            worst_fd = std::max(worst_fd, std::abs(fd - f) / std::max(1.0, std::abs(f)));
        }
    }
    pass = exact_min && zero_force && worst_fd < 1e-6;
    return "V(d)=" + std::to_string(v_at_min) + ", max |F + dV/du| rel " + format_rel(worst_fd);
}

// ------------------------------------------------------------------ 4
std::string check_fdr_monte_carlo(const AcceptanceOptions& opts, bool& pass) {
    const CouplingModel model = CouplingModel::drude(0.1, 10.0, 1.0);
    ThermalState classical;
    classical.kT = 1.0;
    classical.hbar = 1.0;
    classical.mode = ThermalMode::Classical;
    const double d = 2.0;
    ModeGrid grid;
    grid.nu_max = 20.0 * model.omega_d / model.u0;
    grid.n_modes = 2048;

    const double sample_h = 0.1;
    const std::size_t n_samples = 128;
    const std::size_t n_real = 10000;
    NoiseEnsemble ens = generate_noise_ensemble(model, classical, grid, d, n_real,
                                                0xFD12345u, sample_h, n_samples, opts.workers);
    std::vector<std::size_t> lags(20);
    for (std::size_t i = 0; i < 20; ++i) lags[i] = i;
    const EnsembleSummary summary = fdr_check(model, classical, ens, lags, d);

    // quantum target in the high-temperature regime vs the classical target
    ThermalState quantum;
    quantum.hbar = 1.0;
    quantum.kT = 1e3 * quantum.hbar * model.u0 * model.nu_char();
    quantum.mode = ThermalMode::Quantum;
    ThermalState classical_hot = quantum;
    classical_hot.mode = ThermalMode::Classical;
    double worst_q = 0.0;
    const double scale0 =
        fdr_target(model, classical_hot, 0.0, CovariancePair::P11, d, grid.nu_max);
    for (std::size_t i = 0; i < 20; ++i) {
        const double dt = sample_h * static_cast<double>(i);
        for (CovariancePair pc : {CovariancePair::P11, CovariancePair::P12}) {
            const double tq = fdr_target(model, quantum, dt, pc, d, grid.nu_max);
            const double tc = fdr_target(model, classical_hot, dt, pc, d, grid.nu_max);
            worst_q = std::max(worst_q, std::abs(tq - tc) / std::max(std::abs(tc), 0.01 * scale0));
        }
    }
    pass = summary.pass && worst_q < 0.01;
    return "max |z| " + format_rel(summary.max_abs_z) + " over " +
           std::to_string(summary.cells.size()) + " cells; quantum/classical target diff " +
           format_rel(worst_q);
}

// ------------------------------------------------------------------ 5
std::string check_cross_solver(const AcceptanceOptions&, bool& pass) {
    const double tol = 1e-4;
    std::ostringstream detail;

    SolverConfig cfg;
    cfg.h = 5e-4;
    cfg.t_end = 20.0;
    cfg.ic = {0.1, 0.0, -0.05, 0.0};
    cfg.energy_guard_scale = 10.0;
    const std::size_t n = cfg.n_steps();

    OscillatorPair pair;
    pair.omega0 = 1.0;
    pair.d = 2.0;

    ThermalState th;
    th.kT = 0.5;
    th.mode = ThermalMode::Classical;
    ModeGrid grid;
    grid.nu_max = 10.0;
    grid.n_modes = 1024;

    double worst = 0.0;
    {
        const CouplingModel model = CouplingModel::drude(0.1, 10.0, 1.0);
        const BathRealization bath = sample_bath(model, th, grid, 0xC5A11u);
        const NoisePair noise = noise_series(bath, pair.d, 0.0, cfg.h, n);
        auto [fr, fz] = mode_noises(noise.f1, noise.f2);
        const Trajectory loc = integrate_localized(model, pair, &noise, cfg);
        const Trajectory lap = solve_modes_laplace(model, pair, &fr, &fz, cfg);
        const double e = std::max(sup_diff(loc.x1, lap.x1), sup_diff(loc.x2, lap.x2));
        detail << "drude localized|laplace " << format_rel(e);
        worst = std::max(worst, e);
    }
    {
        const CouplingModel model = CouplingModel::ohmic(0.1, 1.0);
        const BathRealization bath = sample_bath(model, th, grid, 0xC5A22u);
        const NoisePair half = noise_series(bath, pair.d, 0.0, 0.5 * cfg.h, 2 * n - 1);
        const NoisePair nodes = node_noise_from_half(half, n);
        auto [fr, fz] = mode_noises(nodes.f1, nodes.f2);
        const Trajectory loc = integrate_localized(model, pair, &nodes, cfg);
        const Trajectory lap = solve_modes_laplace(model, pair, &fr, &fz, cfg);
        const Trajectory dde = integrate_ohmic_dde(model.gamma, model.u0, pair, &half, cfg);
        const double e1 = std::max(sup_diff(loc.x1, lap.x1), sup_diff(loc.x2, lap.x2));
        const double e2 = std::max(sup_diff(loc.x1, dde.x1), sup_diff(loc.x2, dde.x2));
        const double e3 = std::max(sup_diff(lap.x1, dde.x1), sup_diff(lap.x2, dde.x2));
        detail << ", ohmic pairwise " << format_rel(std::max({e1, e2, e3}));
        worst = std::max({worst, e1, e2, e3});
    }
    pass = worst < tol;
    return detail.str();
}

// ------------------------------------------------------------------ 6
std::string check_retardation(const AcceptanceOptions&, bool& pass) {
    Rng rng(0x6AB3Du);
    double worst_pre = 0.0;
    double worst_onset = 0.0;
    pass = true;
    for (int k = 0; k < 20; ++k) {
        const double gamma = 0.02 + 0.28 * rng.uniform();
        const double d = 0.5 + 4.5 * rng.uniform();
        const double u0 = 1.0;
        const double tau0 = d / u0;
        OscillatorPair pair;
        pair.omega0 = 1.0;
        pair.d = d;
        SolverConfig cfg;
        cfg.h = align_step_to_delay(0.01, tau0);
        cfg.t_end = tau0 + 2.0;
        cfg.ic = {0.0, 1.0, 0.0, 0.0};
        const Trajectory traj = integrate_ohmic_dde(gamma, u0, pair, nullptr, cfg);

        double pre = 0.0;
        for (std::size_t i = 0; i < traj.size(); ++i) {
            if (traj.t(i) < tau0 - cfg.h - 1e-12) pre = std::max(pre, std::abs(traj.x2[i]));
        }
        const double onset = retardation_onset(traj, 1e-10);
        worst_pre = std::max(worst_pre, pre);
        const double excess = std::abs(onset - tau0);
        worst_onset = std::max(worst_onset, excess);
        if (pre >= 1e-10 || excess > cfg.h + 1e-12) pass = false;
    }
    return "max |x2| before tau0 " + format_rel(worst_pre) + ", max |onset - tau0| " +
           format_rel(worst_onset);
}

// ------------------------------------------------------------------ 7
std::string check_weak_coupling(const AcceptanceOptions&, bool& pass) {
    OscillatorPair pair;
    pair.omega0 = 1.0;
    pair.d = 1.0;
    const double u0 = 1.0;
    const double tau0 = pair.d / u0;
    SolverConfig cfg;
    cfg.h = 1e-3;
    cfg.t_end = 50.0;
    cfg.energy_guard_scale = 10.0;
    const std::size_t n = cfg.n_steps();

    ThermalState th;
    th.kT = 0.5;
    th.mode = ThermalMode::Classical;
    ModeGrid grid;
    grid.nu_max = 20.0;
    grid.n_modes = 1024;

    auto deviation = [&](double gamma) {
        const CouplingModel model = CouplingModel::ohmic(gamma, u0);
        const BathRealization bath = sample_bath(model, th, grid, 0x7EAFu);
        const NoisePair half = noise_series(bath, pair.d, 0.0, 0.5 * cfg.h, 2 * n - 1);
        const NoisePair nodes = node_noise_from_half(half, n);
        const Trajectory dde = integrate_ohmic_dde(gamma, u0, pair, &half, cfg);
        auto [x1, x2] =
            weak_coupling_solution(gamma, pair.omega0, tau0, nodes.f1, nodes.f2, cfg.h);
        return std::max(sup_diff(dde.x1, x1), sup_diff(dde.x2, x2));
    };

    const double d_hi = deviation(0.02);
    const double d_lo = deviation(0.01);
    const double exponent = std::log2(d_hi / d_lo);
    const double c_fit = d_hi / (0.02 * 0.02);
    pass = exponent >= 1.8;
    return "deviation " + format_rel(d_hi) + " at gamma=0.02, scaling exponent " +
           std::to_string(exponent) + " (C=" + format_rel(c_fit) + ")";
}

// ------------------------------------------------------------------ 8
std::string check_greens_residual(const AcceptanceOptions&, bool& pass) {
    const double gamma = 0.1, omega0 = 1.0;
    double worst = 0.0;
    for (int i = 1; i <= 1000; ++i) {
        const double t = 20.0 * static_cast<double>(i) / 1000.0;
        const double g = greens_function(gamma, omega0, t);
        const double gd = greens_function_dot(gamma, omega0, t);
        const double gdd = greens_function_ddot(gamma, omega0, t);
        worst = std::max(worst, std::abs(gdd + 0.5 * gamma * gd + omega0 * omega0 * g));
    }
    const bool jumps = greens_function(gamma, omega0, 0.0) == 0.0 &&
                       greens_function_dot(gamma, omega0, 0.0) == 1.0;
    pass = worst < 1e-8 && jumps;
    return "max ODE residual " + format_rel(worst) + ", jump conditions " +
           (jumps ? "exact" : "BROKEN");
}

// ------------------------------------------------------------------ 9
std::string check_equilibrium(const AcceptanceOptions& opts, bool& pass) {
    EquilibriumRunSpec spec;
    spec.model = CouplingModel::drude(0.2, 10.0, 1.0);
    spec.pair.omega0 = 1.0;
    spec.pair.d = 2.0;
    spec.thermal.kT = 1.0;
    spec.thermal.mode = ThermalMode::Classical;
    spec.h = 0.025;
    spec.t_end = 200.0 / spec.model.gamma;
    spec.nu_max = 30.0;
    spec.n_fft = 1 << 16;
    spec.burn_in = 5.0 * 2.0 / spec.model.gamma;
    spec.sample_every = 0.5;
    spec.memory_window = 6.0;
    spec.n_real = 10000;
    spec.master_seed = 0xE9B01u;
    spec.workers = opts.workers;

    const MomentEnsemble moments = run_equilibrium_ensemble(spec);
    const EnsembleSummary summary = equipartition_check(moments, spec.thermal, spec.pair);
    pass = summary.pass;
    std::ostringstream os;
    os << "max |z| " << format_rel(summary.max_abs_z) << " (";
    for (const auto& c : summary.cells)
        os << c.pair << "=" << std::setprecision(5) << c.estimate << " ";
    os << "targets 0.5 2 0.5 2)";
    return os.str();
}

// ------------------------------------------------------------------ 10
std::string check_negative_controls(const AcceptanceOptions& opts, bool& pass) {
    std::ostringstream detail;
    bool wrong_d_failed = false, wrong_t_failed = false, broken_pref_failed = false;

    { // FDR against the wrong separation must fail
        const CouplingModel model = CouplingModel::drude(0.1, 10.0, 1.0);
        ThermalState th;
        th.kT = 1.0;
        th.mode = ThermalMode::Classical;
        ModeGrid grid;
        grid.nu_max = 50.0;
        grid.n_modes = 512;
        NoiseEnsemble ens = generate_noise_ensemble(model, th, grid, /*d=*/2.0, 1500, 0xBADD1u,
                                                    0.1, 64, opts.workers);
        std::vector<std::size_t> lags = {0, 2, 4, 8, 16};
        const EnsembleSummary bad = fdr_check(model, th, ens, lags, /*d=*/0.0);
        wrong_d_failed = !bad.pass;
        detail << "wrong-d fdr max|z| " << format_rel(bad.max_abs_z);
    }
    { // equipartition against the wrong temperature must fail
        EquilibriumRunSpec spec;
        spec.model = CouplingModel::drude(0.2, 10.0, 1.0);
        spec.pair.d = 2.0;
        spec.thermal.kT = 0.5;
        spec.thermal.mode = ThermalMode::Classical;
        spec.h = 0.025;
        spec.t_end = 150.0;
        spec.nu_max = 30.0;
        spec.n_fft = 1 << 13;
        spec.burn_in = 50.0;
        spec.memory_window = 6.0;
        spec.n_real = 200;
        spec.master_seed = 0xBADD2u;
        spec.workers = opts.workers;
        const MomentEnsemble moments = run_equilibrium_ensemble(spec);
        ThermalState wrong = spec.thermal;
        wrong.kT = 1.0;
        const EnsembleSummary bad = equipartition_check(moments, wrong, spec.pair);
        wrong_t_failed = !bad.pass;
        detail << ", wrong-T equipartition max|z| " << format_rel(bad.max_abs_z);
    }
    { // the paper-printed inversion prefactor must break the round trip at u0 != 1
        const CouplingModel drude = CouplingModel::drude(0.1, 10.0, 2.0);
        auto chi = [&](double t) { return chi_smooth(drude, t); };
        InversionOptions printed;
        printed.prefactor = InversionPrefactor::PaperPrinted;
        double worst = 0.0;
        for (double nu : {1.0, 2.0, 5.0, 10.0}) {
            const double got = invert_kernel_to_coupling(chi, 1.0 / drude.omega_d, drude, nu, printed);
            const double want = coupling_strength_sq(drude, nu);
            worst = std::max(worst, std::abs(got - want) / want);
        }
        broken_pref_failed = worst > 1e-4;
        detail << ", broken-prefactor rel err " << format_rel(worst);
    }
    pass = wrong_d_failed && wrong_t_failed && broken_pref_failed;
    return detail.str();
}

} // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts, std::ostream& log) {
    const std::vector<Check> checks = {
        {1, "kernel quadrature oracle vs closed forms (rel 1e-6, 100+ pairs)", 10.0,
         check_kernel_oracle},
        {2, "kernel -> coupling inversion round trip (rel 1e-4)", 5.0,
         check_inversion_round_trip},
        {3, "induced potential/force consistency (FD 1e-6, exact minimum)", 1.0,
         check_potential_force},
        {4, "FDR Monte-Carlo, classical Drude ensemble + high-T quantum target", 300.0,
         check_fdr_monte_carlo},
        {5, "cross-solver agreement (localized / modes_laplace / DDE, sup 1e-4)", 60.0,
         check_cross_solver},
        {6, "strict retardation of the Ohmic delay system (20 random draws)", 30.0,
         check_retardation},
        {7, "weak-coupling series vs DDE, gamma^2 scaling (exponent >= 1.8)", 60.0,
         check_weak_coupling},
        {8, "Green's function ODE residual < 1e-8 and exact jump conditions", 1.0,
         check_greens_residual},
        {9, "classical equilibrium <R^2>, <Z^2> (N=10^4, 3 standard errors)", 600.0,
         check_equilibrium},
        {10, "negative controls fail (wrong d, wrong T, broken prefactor)", 60.0,
         check_negative_controls},
    };

    std::vector<CriterionResult> results;
    for (const auto& check : checks) {
        if (!opts.only.empty() &&
            std::find(opts.only.begin(), opts.only.end(), check.index) == opts.only.end())
            continue;
        CriterionResult r;
        r.index = check.index;
        r.name = check.name;
        r.budget_seconds = check.budget;
        const auto start = std::chrono::steady_clock::now();
        try {
            r.detail = check.run(opts, r.pass);
        } catch (const std::exception& e) {
            r.pass = false;
            r.detail = std::string("exception: ") + e.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (r.seconds > r.budget_seconds) {
            r.pass = false;
            r.detail += " [over runtime budget]";
        }
        log << (r.pass ? "[PASS] " : "[FAIL] ") << r.index << ". " << r.name << " — "
            << r.detail << " (" << std::fixed << std::setprecision(1) << r.seconds << "s/"
            << std::setprecision(0) << r.budget_seconds << "s)" << std::endl;
        results.push_back(std::move(r));
    }
    return results;
}

bool all_passed(const std::vector<CriterionResult>& results) {
    for (const auto& r : results)
        if (!r.pass) return false;
    return !results.empty();
}

} // namespace bathlab
