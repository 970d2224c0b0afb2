// bathlab — command-line laboratory for two Brownian oscillators in a common
// scalar-field heat bath. Subcommands: kernels, potential, noise-check,
// simulate, respond, verify.

#include <filesystem>
#include <iostream>

#include "CLI11.hpp"

#include "bathlab/acceptance.hpp"
#include "bathlab/analysis.hpp"
#include "bathlab/config.hpp"
#include "bathlab/ensemble.hpp"
#include "bathlab/gle.hpp"
#include "bathlab/io.hpp"
#include "bathlab/rng.hpp"
#include "bathlab/version.hpp"

namespace {

using namespace bathlab;

struct CommonArgs {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_override;
    bool force = false;
    std::size_t workers = 0;
};

ScenarioConfig load_scenario(const CommonArgs& args) {
    KeyValueConfig kv = args.config_path.empty()
                            ? KeyValueConfig::parse_string("", "<empty>")
                            : KeyValueConfig::parse_file(args.config_path);
    for (const auto& ov : args.overrides) kv.apply_override(ov);
    ScenarioConfig sc = ScenarioConfig::from_key_values(kv);
    if (!args.out_override.empty()) sc.output.directory = args.out_override;
    return sc;
}

std::string out_path(const ScenarioConfig& sc, const std::string& file) {
    ensure_directory(sc.output.directory);
    return (std::filesystem::path(sc.output.directory) / file).string();
}

void add_common(CLI::App* cmd, CommonArgs& args, bool needs_config = true) {
    auto* opt = cmd->add_option("-c,--config", args.config_path, "scenario config file");
    if (needs_config) opt->required();
    cmd->add_option("--set", args.overrides,
                    "override a config value, e.g. --set model.gamma=0.2 (repeatable)");
    cmd->add_option("-o,--out", args.out_override, "output directory (overrides config)");
    cmd->add_flag("--force", args.force, "allow overwriting existing output files");
    cmd->add_option("--workers", args.workers,
                    "worker threads for ensembles (default: BATHLAB_WORKERS or hardware)");
}

int cmd_kernels(const CommonArgs& args, bool paper_prefactor) {
    ScenarioConfig sc = load_scenario(args);
    const std::size_t n = sc.solver.n_steps();
    KernelTableColumns cols;
    cols.t.resize(n);
    cols.chi.resize(n);
    cols.chi_d.resize(n);
    cols.chi_r.resize(n);
    cols.chi_z.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = sc.solver.h * static_cast<double>(i);
        cols.t[i] = t;
        cols.chi[i] = chi_smooth(sc.model, t);
        cols.chi_d[i] = chi_d_smooth(sc.model, t, sc.pair.d);
        cols.chi_r[i] = cols.chi[i] + cols.chi_d[i];
        cols.chi_z[i] = cols.chi[i] - cols.chi_d[i];
    }
    const std::string path = out_path(sc, "kernels.csv");
    write_kernel_csv(path, sc.model, sc.pair.d, cols, sc.config_hash, args.force);
    std::cout << "wrote " << path << "\n";

    if (paper_prefactor) {
        // comparison column: coupling recovered with the printed prefactor
        InversionOptions printed;
        printed.prefactor = InversionPrefactor::PaperPrinted;
        auto chi = [&](double t) { return chi_smooth(sc.model, t); };
        const double t_scale = 1.0 / (sc.model.nu_char() * sc.model.u0);
        std::ostringstream os;
        os << "# model: " << sc.model.tag() << "\n";
        os << "nu,g2_model,g2_consistent,g2_paper_printed\n";
        for (int i = 0; i <= 40; ++i) {
            const double nu =
                0.01 * sc.model.nu_char() * std::pow(1000.0, static_cast<double>(i) / 40.0);
            os.precision(17);
            os << nu << ',' << coupling_strength_sq(sc.model, nu) << ','
               << invert_kernel_to_coupling(chi, t_scale, sc.model, nu) << ','
               << invert_kernel_to_coupling(chi, t_scale, sc.model, nu, printed) << '\n';
        }
        const std::string inv_path = out_path(sc, "inversion.csv");
        write_text_file(inv_path, os.str(), args.force);
        std::cout << "wrote " << inv_path << "\n";
    }
    return 0;
}

int cmd_potential(const CommonArgs& args) {
    ScenarioConfig sc = load_scenario(args);
    const double d = sc.pair.d;
    const double span = 10.0 / sc.model.nu_char();
    const std::size_t n = 401;
    std::vector<double> u(n), V(n), F(n);
    for (std::size_t i = 0; i < n; ++i) {
        u[i] = d - span + 2.0 * span * static_cast<double>(i) / static_cast<double>(n - 1);
        V[i] = induced_potential(sc.model, u[i], d);
        F[i] = induced_force(sc.model, u[i], d);
    }
    const std::string path = out_path(sc, "potential.csv");
    write_potential_csv(path, sc.model, d, u, V, F, sc.config_hash, args.force);
    std::cout << "wrote " << path << "\n";
    return 0;
}

int cmd_noise_check(const CommonArgs& args) {
    ScenarioConfig sc = load_scenario(args);
    const double sample_h = sc.solver.h;
    const std::size_t n_samples = std::max<std::size_t>(64, sc.solver.n_steps());
    NoiseEnsemble ens =
        generate_noise_ensemble(sc.model, sc.thermal, sc.grid, sc.pair.d,
                                std::max<std::size_t>(2, sc.n_realizations), sc.seed, sample_h,
                                std::min<std::size_t>(n_samples, 256), args.workers);
    std::vector<std::size_t> lags;
    for (std::size_t i = 0; i < 20; ++i) lags.push_back(i);
    EnsembleSummary summary = fdr_check(sc.model, sc.thermal, ens, lags, sc.pair.d);
    summary.config_hash = sc.config_hash;
    const std::string path = out_path(sc, "noise_check.json");
    write_text_file(path, ensemble_summary_to_json_text(summary), args.force);
    std::cout << "wrote " << path << " (verdict: " << (summary.pass ? "pass" : "fail")
              << ", max |z| = " << summary.max_abs_z << ")\n";
    return summary.pass ? 0 : 1;
}

Trajectory run_single(const ScenarioConfig& sc, std::uint64_t seed) {
    const std::size_t n = sc.solver.n_steps();
    Trajectory traj;
    switch (sc.method) {
        case SolverMethod::Localized: {
            const BathRealization bath = sample_bath(sc.model, sc.thermal, sc.grid, seed);
            const NoisePair noise = noise_series(bath, sc.pair.d, 0.0, sc.solver.h, n);
            traj = integrate_localized(sc.model, sc.pair, &noise, sc.solver);
            break;
        }
        case SolverMethod::Modes: {
            const BathRealization bath = sample_bath(sc.model, sc.thermal, sc.grid, seed);
            const NoisePair noise = noise_series(bath, sc.pair.d, 0.0, sc.solver.h, n);
            auto [fr, fz] = mode_noises(noise.f1, noise.f2);
            traj = integrate_modes(sc.model, sc.pair, &fr, &fz, sc.solver);
            break;
        }
        case SolverMethod::ModesLaplace: {
            const BathRealization bath = sample_bath(sc.model, sc.thermal, sc.grid, seed);
            const NoisePair noise = noise_series(bath, sc.pair.d, 0.0, sc.solver.h, n);
            auto [fr, fz] = mode_noises(noise.f1, noise.f2);
            traj = solve_modes_laplace(sc.model, sc.pair, &fr, &fz, sc.solver);
            break;
        }
        case SolverMethod::VolterraFull: {
            const BathRealization bath = sample_bath(sc.model, sc.thermal, sc.grid, seed);
            traj = integrate_full(sc.model, sc.pair, &bath, sc.solver);
            break;
        }
        case SolverMethod::OhmicDde: {
            if (sc.model.family != CouplingFamily::Ohmic)
                throw ConfigError("solver.method=ohmic_dde requires model.family=ohmic");
            const BathRealization bath = sample_bath(sc.model, sc.thermal, sc.grid, seed);
            const NoisePair half =
                noise_series(bath, sc.pair.d, 0.0, 0.5 * sc.solver.h, 2 * n - 1);
            traj = integrate_ohmic_dde(sc.model.gamma, sc.model.u0, sc.pair, &half, sc.solver);
            break;
        }
        case SolverMethod::WeakCoupling: {
            if (sc.model.family != CouplingFamily::Ohmic)
                throw ConfigError("solver.method=weak_coupling requires model.family=ohmic");
            const BathRealization bath = sample_bath(sc.model, sc.thermal, sc.grid, seed);
            const NoisePair noise = noise_series(bath, sc.pair.d, 0.0, sc.solver.h, n);
            auto [x1, x2] = weak_coupling_solution(sc.model.gamma, sc.pair.omega0,
                                                   sc.pair.d / sc.model.u0, noise.f1, noise.f2,
                                                   sc.solver.h);
            traj.h = sc.solver.h;
            traj.solver_tag = "weak_coupling";
            traj.x1 = std::move(x1);
            traj.x2 = std::move(x2);
            traj.v1.assign(n, 0.0);
            traj.v2.assign(n, 0.0);
            for (std::size_t i = 1; i + 1 < n; ++i) {
                traj.v1[i] = (traj.x1[i + 1] - traj.x1[i - 1]) / (2.0 * sc.solver.h);
                traj.v2[i] = (traj.x2[i + 1] - traj.x2[i - 1]) / (2.0 * sc.solver.h);
            }
            traj.fill_modes_from_xy();
            traj.f1 = noise.f1;
            traj.f2 = noise.f2;
            break;
        }
    }
    traj.seed = seed;
    traj.config_hash = sc.config_hash;
    return traj;
}

int cmd_simulate(const CommonArgs& args) {
    ScenarioConfig sc = load_scenario(args);
    const bool want_csv = std::find(sc.output.formats.begin(), sc.output.formats.end(),
                                    "csv") != sc.output.formats.end();
    const bool want_json = std::find(sc.output.formats.begin(), sc.output.formats.end(),
                                     "json") != sc.output.formats.end();
    if (sc.n_realizations == 1) {
        const Trajectory traj = run_single(sc, sc.seed);
        if (want_csv)
            write_trajectory_csv(out_path(sc, "trajectory.csv"), traj, sc.config_hash, args.force);
        if (want_json)
            write_trajectory_sidecar(out_path(sc, "trajectory.json"), traj, sc, args.force);
        std::cout << "wrote trajectory (" << traj.size() << " samples, solver "
                  << traj.solver_tag << ")\n";
        return 0;
    }
    // ensemble mode: one file per realization plus a summary
    std::vector<double> r2(sc.n_realizations), z2(sc.n_realizations);
    for (std::size_t r = 0; r < sc.n_realizations; ++r) {
        const std::uint64_t seed = derive_stream_seed(sc.seed, r);
        const Trajectory traj = run_single(sc, seed);
        const std::string stem = "trajectory_" + std::to_string(r);
        if (want_csv)
            write_trajectory_csv(out_path(sc, stem + ".csv"), traj, sc.config_hash, args.force);
        if (want_json)
            write_trajectory_sidecar(out_path(sc, stem + ".json"), traj, sc, args.force);
        const std::size_t last = traj.size() - 1;
        r2[r] = traj.R[last] * traj.R[last];
        z2[r] = traj.Z[last] * traj.Z[last];
    }
    std::ostringstream os;
    os.precision(17);
    os << "{\n  \"n_realizations\": " << sc.n_realizations << ",\n  \"master_seed\": "
       << sc.seed << ",\n  \"config_hash\": \"" << sc.config_hash << "\",\n";
    double mr = 0, mz = 0;
    for (std::size_t r = 0; r < sc.n_realizations; ++r) {
        mr += r2[r];
        mz += z2[r];
    }
    os << "  \"final_R2_mean\": " << mr / static_cast<double>(sc.n_realizations)
       << ",\n  \"final_Z2_mean\": " << mz / static_cast<double>(sc.n_realizations) << "\n}\n";
    write_text_file(out_path(sc, "ensemble_summary.json"), os.str(), args.force);
    std::cout << "wrote " << sc.n_realizations << " trajectories + ensemble_summary.json\n";
    return 0;
}

int cmd_respond(const CommonArgs& args) {
    ScenarioConfig sc = load_scenario(args);
    const std::size_t n = sc.solver.n_steps();
    const ResponseTable table = tabulate_responses(sc.model, sc.pair, sc.solver.h, n);
    const std::string path = out_path(sc, "response.csv");
    write_response_csv(path, sc.model, sc.pair, sc.solver.h, table, sc.config_hash, args.force);
    std::cout << "wrote " << path << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"bathlab: two Brownian oscillators in a common scalar-field heat bath"};
    app.set_version_flag("--version", std::string("bathlab ") + bathlab::kVersion);
    app.require_subcommand(1);

    CommonArgs kernels_args, potential_args, noise_args, simulate_args, respond_args;
    bool paper_prefactor = false;

    auto* kernels = app.add_subcommand("kernels", "tabulate chi, chi_d, chi_R, chi_Z to CSV");
    add_common(kernels, kernels_args);
    kernels->add_flag("--paper-prefactor", paper_prefactor,
                      "also emit the coupling recovered with the printed inversion prefactor "
                      "(comparison only)");

    auto* potential = app.add_subcommand("potential", "tabulate induced V(u12) and F12 to CSV");
    add_common(potential, potential_args);

    auto* noise = app.add_subcommand("noise-check", "verify noise correlations against the FDR");
    add_common(noise, noise_args);

    auto* simulate = app.add_subcommand("simulate", "integrate trajectories and write CSV + sidecar");
    add_common(simulate, simulate_args);

    auto* respond = app.add_subcommand("respond", "tabulate response functions eta_pm, xi_pm");
    add_common(respond, respond_args);

    bathlab::AcceptanceOptions acc;
    auto* verify = app.add_subcommand("verify", "run the acceptance suite");
    verify->add_option("--workers", acc.workers, "worker threads");
    verify->add_option("--only", acc.only, "run only these criterion numbers");

    CLI11_PARSE(app, argc, argv);

    try {
        if (kernels->parsed()) return cmd_kernels(kernels_args, paper_prefactor);
        if (potential->parsed()) return cmd_potential(potential_args);
        if (noise->parsed()) return cmd_noise_check(noise_args);
        if (simulate->parsed()) return cmd_simulate(simulate_args);
        if (respond->parsed()) return cmd_respond(respond_args);
        if (verify->parsed()) {
            const auto results = bathlab::run_acceptance(acc, std::cout);
            return bathlab::all_passed(results) ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
