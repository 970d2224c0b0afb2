#include "bathlab/ensemble.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

#include "bathlab/rng.hpp"

namespace bathlab {

std::size_t resolve_worker_count(std::size_t requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("BATHLAB_WORKERS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<std::size_t>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

void parallel_for_index(std::size_t n, std::size_t workers,
                        const std::function<void(std::size_t)>& fn) {
    workers = std::min(resolve_worker_count(workers), std::max<std::size_t>(n, 1));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto body = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

NoiseEnsemble generate_noise_ensemble(const CouplingModel& model, const ThermalState& thermal,
                                      const ModeGrid& grid, double d, std::size_t n_real,
                                      std::uint64_t master_seed, double sample_h,
                                      std::size_t n_samples, std::size_t workers) {
    NoiseEnsemble ens;
    ens.h = sample_h;
    ens.n_samples = n_samples;
    ens.f1.resize(n_real);
    ens.f2.resize(n_real);
    ens.model_tag = model.tag();
    ens.thermal_tag = thermal.tag();
    ens.d = d;
    ens.nu_max = grid.nu_max;
    ens.master_seed = master_seed;

    parallel_for_index(n_real, workers, [&](std::size_t r) {
        const std::uint64_t seed = derive_stream_seed(master_seed, r);
        const BathRealization bath = sample_bath(model, thermal, grid, seed);
        NoisePair series = noise_series(bath, d, 0.0, sample_h, n_samples);
        ens.f1[r] = std::move(series.f1);
        ens.f2[r] = std::move(series.f2);
    });
    return ens;
}

MomentEnsemble run_equilibrium_ensemble(const EquilibriumRunSpec& spec) {
    spec.model.validate();
    spec.pair.validate();
    spec.thermal.validate();

    // snap the mode grid onto the FFT-commensurate spacing
    const double dnu = commensurate_delta_nu(spec.model.u0, spec.h, spec.n_fft);
    ModeGrid grid;
    grid.n_modes = static_cast<std::size_t>(std::floor(spec.nu_max / dnu));
    grid.nu_max = dnu * static_cast<double>(grid.n_modes);
    if (grid.n_modes < 2 || grid.n_modes > spec.n_fft)
        throw std::invalid_argument("run_equilibrium_ensemble: bad mode grid (check nu_max/n_fft)");

    SolverConfig cfg;
    cfg.h = spec.h;
    cfg.t_end = spec.t_end;
    cfg.memory_window = spec.memory_window;
    cfg.energy_guard_scale = 100.0 * spec.thermal.kT;
    const std::size_t n = cfg.n_steps();
    if (n > spec.n_fft)
        throw std::invalid_argument("run_equilibrium_ensemble: grid longer than n_fft");

    const std::size_t stride =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(spec.sample_every / spec.h)));
    const std::size_t burn_idx = static_cast<std::size_t>(std::ceil(spec.burn_in / spec.h));

    MomentEnsemble out;
    out.means.resize(spec.n_real);
    out.model_tag = spec.model.tag();
    out.thermal_tag = spec.thermal.tag();
    out.burn_in = spec.burn_in;
    out.master_seed = spec.master_seed;

    parallel_for_index(spec.n_real, spec.workers, [&](std::size_t r) {
        const std::uint64_t seed = derive_stream_seed(spec.master_seed, r);
        const BathRealization bath = sample_bath(spec.model, spec.thermal, grid, seed);
        const NoisePair series = noise_series_fft(bath, spec.pair.d, spec.h, n, spec.n_fft);
        auto [fr, fz] = mode_noises(series.f1, series.f2);
        const Trajectory traj = integrate_modes(spec.model, spec.pair, &fr, &fz, cfg);
        double sr = 0.0, sz = 0.0, svr = 0.0, svz = 0.0;
        std::size_t count = 0;
        for (std::size_t i = burn_idx; i < n; i += stride) {
            const double vr = 0.5 * (traj.v1[i] + traj.v2[i]);
            const double vz = traj.v2[i] - traj.v1[i];
            sr += traj.R[i] * traj.R[i];
            sz += traj.Z[i] * traj.Z[i];
            svr += vr * vr;
            svz += vz * vz;
            ++count;
        }
        const double inv = 1.0 / static_cast<double>(count);
        out.means[r] = {sr * inv, sz * inv, svr * inv, svz * inv};
    });
    return out;
}

} // namespace bathlab
