#include <cmath>

#include "doctest.h"

#include "bathlab/analysis.hpp"
#include "bathlab/ensemble.hpp"
#include "bathlab/rng.hpp"

using namespace bathlab;

TEST_CASE("covariance estimator on known ensembles") {
    SUBCASE("constant series are degenerate with zero error") {
        std::vector<std::vector<double>> ens(8, std::vector<double>(32, 3.0));
        const CovEstimate e = symmetrized_covariance(ens, ens, 0);
        CHECK(e.estimate == doctest::Approx(9.0));
        CHECK(e.stderr_est == 0.0);
        CHECK(e.degenerate);
    }
    SUBCASE("independent white ensembles decorrelate at lag 0") {
        Rng rng(2024);
        const std::size_t n_real = 8000, len = 16;
        std::vector<std::vector<double>> a(n_real), b(n_real);
        for (std::size_t r = 0; r < n_real; ++r) {
            a[r].resize(len);
            b[r].resize(len);
            for (std::size_t i = 0; i < len; ++i) {
                a[r][i] = rng.normal();
                b[r][i] = rng.normal();
            }
        }
        const CovEstimate e = symmetrized_covariance(a, b, 0);
        CHECK(std::abs(e.estimate) < 3.0 * e.stderr_est);
        const CovEstimate self = symmetrized_covariance(a, a, 0);
        CHECK(self.estimate == doctest::Approx(1.0).epsilon(0.05));
    }
    SUBCASE("symmetrized and plain product paths are bitwise identical") {
        Rng rng(7);
        std::vector<std::vector<double>> a(16), b(16);
        for (std::size_t r = 0; r < 16; ++r) {
            a[r].resize(64);
            b[r].resize(64);
            for (std::size_t i = 0; i < 64; ++i) {
                a[r][i] = rng.normal();
                b[r][i] = rng.normal();
            }
        }
        for (std::size_t lag : {0u, 3u, 11u}) {
            const CovEstimate sym = symmetrized_covariance(a, b, lag, true);
            const CovEstimate plain = symmetrized_covariance(a, b, lag, false);
            CHECK(sym.estimate == plain.estimate);
            CHECK(sym.stderr_est == plain.stderr_est);
        }
    }
    SUBCASE("input contract violations") {
        std::vector<std::vector<double>> one(1, std::vector<double>(8, 0.0));
        CHECK_THROWS_AS(symmetrized_covariance(one, one, 0), std::invalid_argument);
        std::vector<std::vector<double>> two(2, std::vector<double>(8, 0.0));
        CHECK_THROWS_AS(symmetrized_covariance(two, two, 8), std::invalid_argument);
    }
}

TEST_CASE("standard errors shrink like N^{-1/2}") {
    Rng rng(31);
    auto stderr_at = [&](std::size_t n_real) {
        std::vector<std::vector<double>> a(n_real);
        for (auto& s : a) {
            s.resize(8);
            for (auto& v : s) v = rng.normal();
        }
        return symmetrized_covariance(a, a, 0).stderr_est;
    };
    const double s100 = stderr_at(100);
    const double s10000 = stderr_at(10000);
    const double exponent = std::log(s10000 / s100) / std::log(100.0);
    CHECK(exponent == doctest::Approx(-0.5).epsilon(0.3));
}

TEST_CASE("fdr_check refuses mismatched provenance") {
    const CouplingModel drude = CouplingModel::drude(0.1, 10.0, 1.0);
    ThermalState th;
    th.kT = 1.0;
    th.mode = ThermalMode::Classical;
    ModeGrid grid;
    grid.nu_max = 40.0;
    grid.n_modes = 128;
    NoiseEnsemble ens = generate_noise_ensemble(drude, th, grid, 1.0, 64, 5, 0.1, 32, 2);

    const CouplingModel other = CouplingModel::drude(0.2, 10.0, 1.0);
    CHECK_THROWS_AS(fdr_check(other, th, ens, {0}, 1.0), std::invalid_argument);
    ThermalState hot = th;
    hot.kT = 2.0;
    CHECK_THROWS_AS(fdr_check(drude, hot, ens, {0}, 1.0), std::invalid_argument);
}

TEST_CASE("negative control: wrong separation fails the FDR check") {
    const CouplingModel drude = CouplingModel::drude(0.1, 10.0, 1.0);
    ThermalState th;
    th.kT = 1.0;
    th.mode = ThermalMode::Classical;
    ModeGrid grid;
    grid.nu_max = 50.0;
    grid.n_modes = 256;
    NoiseEnsemble ens = generate_noise_ensemble(drude, th, grid, 2.0, 600, 99, 0.1, 48, 2);
    const EnsembleSummary good = fdr_check(drude, th, ens, {0, 4, 9}, 2.0);
    CHECK(good.pass);
    const EnsembleSummary bad = fdr_check(drude, th, ens, {0, 4, 9}, 0.0);
    CHECK_FALSE(bad.pass);
    CHECK(bad.max_abs_z > 10.0);
}

TEST_CASE("equipartition check verdicts") {
    ThermalState th;
    th.kT = 1.0;
    th.mode = ThermalMode::Classical;
    OscillatorPair pair;
    pair.omega0 = 1.0;
    pair.d = 2.0;

    SUBCASE("zero-temperature ensemble trivially passes") {
        MomentEnsemble ens;
        ens.means.assign(64, {0.0, 0.0, 0.0, 0.0});
        ThermalState cold = th;
        cold.kT = 0.0;
        const EnsembleSummary s = equipartition_check(ens, cold, pair);
        CHECK(s.pass);
    }
    SUBCASE("temperature scaling moves all four targets") {
        Rng rng(4);
        MomentEnsemble ens;
        ens.means.resize(4000);
        // synthetic draws around the kT = 1 targets
        for (auto& m : ens.means) {
            m = {0.5 + 0.02 * rng.normal(), 2.0 + 0.05 * rng.normal(),
                 0.5 + 0.02 * rng.normal(), 2.0 + 0.05 * rng.normal()};
        }
        CHECK(equipartition_check(ens, th, pair).pass);
        ThermalState half = th;
        half.kT = 0.5;
        const EnsembleSummary bad = equipartition_check(ens, half, pair);
        CHECK_FALSE(bad.pass); // estimates track kT = 1, targets halved
        CHECK(bad.max_abs_z > 10.0);
    }
    SUBCASE("quantum targets are unsupported") {
        MomentEnsemble ens;
        ens.means.assign(4, {0, 0, 0, 0});
        ThermalState q;
        q.mode = ThermalMode::Quantum;
        q.hbar = 1.0;
        CHECK_THROWS_AS(equipartition_check(ens, q, pair), std::invalid_argument);
    }
}

TEST_CASE("retardation onset scanning") {
    Trajectory traj;
    traj.h = 0.01;
    traj.x1.assign(400, 0.0);
    traj.x2.assign(400, 0.0);
    traj.v1.assign(400, 0.0);
    traj.v2.assign(400, 0.0);
    traj.x2[250] = 1e-6;
    CHECK(retardation_onset(traj, 1e-10) == doctest::Approx(2.5));
    CHECK(std::isinf(retardation_onset(traj, 1.0)));
}
