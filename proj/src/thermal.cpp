#include "bathlab/thermal.hpp"

#include <cmath>
#include <complex>
#include <sstream>

#include "bathlab/fft.hpp"
#include "bathlab/kernels.hpp"
#include "bathlab/quadrature.hpp"
#include "bathlab/rng.hpp"

namespace bathlab {

void ThermalState::validate() const {
    if (kT < 0.0) throw std::invalid_argument("ThermalState: kT must be >= 0");
    if (hbar < 0.0) throw std::invalid_argument("ThermalState: hbar must be >= 0");
    if (hbar == 0.0 && mode == ThermalMode::Quantum)
        throw std::invalid_argument("ThermalState: quantum mode requires hbar > 0");
}

std::string ThermalState::tag() const {
    std::ostringstream os;
    os.precision(17);
    os << (mode == ThermalMode::Classical ? "classical" : "quantum") << "(kT=" << kT
       << ",hbar=" << hbar << ")";
    return os.str();
}

double ThermalState::coth_factor(double omega) const {
    if (kT == 0.0) return 1.0;
    const double x = hbar * omega / (2.0 * kT);
    if (x > 350.0) return 1.0;
    return 1.0 / std::tanh(x);
}

double spectral_truncation_fraction(const CouplingModel& model, double nu_max) {
    switch (model.family) {
        case CouplingFamily::ExponentialCutoff: {
            // integrand ~ nu^2 e^{-nu/nu0}: tail/total = e^{-x}(x^2 + 2x + 2)/2
            const double x = nu_max / model.nu0;
            return std::exp(-x) * (x * x + 2.0 * x + 2.0) / 2.0;
        }
        case CouplingFamily::Drude: {
            const double lx = model.lambda_d() * nu_max;
            return 1.0 - (2.0 / M_PI) * std::atan(lx);
        }
        case CouplingFamily::Ohmic:
            return 1.0; // flat spectrum; the total is not integrable
    }
    return 0.0;
}

BathRealization sample_bath(const CouplingModel& model, const ThermalState& thermal,
                            const ModeGrid& grid, std::uint64_t seed,
                            const SampleOptions& opts) {
    model.validate();
    thermal.validate();
    if (!(grid.nu_max > 0.0) || grid.n_modes < 2)
        throw std::invalid_argument("sample_bath: need nu_max > 0 and n_modes >= 2");

    BathRealization bath;
    bath.grid = grid;
    bath.seed = seed;
    bath.u0 = model.u0;
    bath.model_tag = model.tag();
    bath.thermal_tag = thermal.tag();
    bath.truncation_fraction = spectral_truncation_fraction(model, grid.nu_max);
    if (opts.strict && bath.truncation_fraction > opts.truncation_warn_fraction) {
        std::ostringstream os;
        os << "sample_bath: spectral weight beyond nu_max is " << bath.truncation_fraction
           << " of the total (limit " << opts.truncation_warn_fraction << " in strict mode)";
        throw std::invalid_argument(os.str());
    }

    const std::size_t n = grid.n_modes;
    const double dnu = grid.delta_nu();
    bath.y0.resize(n);
    bath.p0.resize(n);
    bath.z0.resize(n);
    bath.q0.resize(n);
    bath.force_weight.resize(n);

    Rng rng(seed);
    for (std::size_t k = 0; k < n; ++k) {
        const double nu = grid.nu(k);
        const double omega = model.dispersion(nu);
        double amp_var, mom_var;
        if (thermal.mode == ThermalMode::Classical) {
            amp_var = thermal.kT / (omega * omega) / dnu;
            mom_var = thermal.kT / dnu;
        } else {
            const double c = thermal.coth_factor(omega);
            amp_var = thermal.hbar / (2.0 * omega) * c / dnu;
            mom_var = thermal.hbar * omega / 2.0 * c / dnu;
        }
        const double amp_sd = std::sqrt(amp_var);
        const double mom_sd = std::sqrt(mom_var);
        // draw order is part of the reproducibility contract: y0, p0, z0, q0
        bath.y0[k] = amp_sd * rng.normal();
        bath.p0[k] = mom_sd * rng.normal();
        bath.z0[k] = amp_sd * rng.normal();
        bath.q0[k] = mom_sd * rng.normal();
        bath.force_weight[k] = dnu * nu * std::sqrt(coupling_strength_sq(model, nu));
    }
    return bath;
}

double noise_force(const BathRealization& bath, int which, double t, double d) {
    if (which != 1 && which != 2)
        throw std::invalid_argument("noise_force: oscillator index must be 1 or 2");
    const std::size_t n = bath.grid.n_modes;
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double nu = bath.grid.nu(k);
        const double omega = bath.u0 * nu;
        const double c = std::cos(omega * t);
        const double s = std::sin(omega * t);
        const double z = bath.z0[k] * c + bath.q0[k] / omega * s;
        double mode_term;
        if (which == 1) {
            mode_term = z;
        } else {
            const double y = bath.y0[k] * c + bath.p0[k] / omega * s;
            mode_term = y * std::sin(nu * d) + z * std::cos(nu * d);
        }
        acc += bath.force_weight[k] * mode_term;
    }
    return -acc;
}

NoisePair noise_series(const BathRealization& bath, double d, double t0, double h,
                       std::size_t n) {
    NoisePair out;
    out.t0 = t0;
    out.h = h;
    out.f1.assign(n, 0.0);
    out.f2.assign(n, 0.0);
    const std::size_t nm = bath.grid.n_modes;
    constexpr std::size_t resync = 1024; // re-seed the rotation to cap drift

    for (std::size_t k = 0; k < nm; ++k) {
        const double nu = bath.grid.nu(k);
        const double omega = bath.u0 * nu;
        const double cw = bath.force_weight[k];
        const double sd = std::sin(nu * d);
        const double cd = std::cos(nu * d);
        const double cs = std::cos(omega * h);
        const double sn = std::sin(omega * h);
        double c = std::cos(omega * t0);
        double s = std::sin(omega * t0);
        const double py = bath.p0[k] / omega;
        const double qz = bath.q0[k] / omega;
        for (std::size_t i = 0; i < n; ++i) {
            if (i != 0 && i % resync == 0) {
                const double t = t0 + h * static_cast<double>(i);
                c = std::cos(omega * t);
                s = std::sin(omega * t);
            }
            const double z = bath.z0[k] * c + qz * s;
            const double y = bath.y0[k] * c + py * s;
            out.f1[i] -= cw * z;
            out.f2[i] -= cw * (y * sd + z * cd);
            const double cn = c * cs - s * sn;
            s = s * cs + c * sn;
            c = cn;
        }
    }
    return out;
}

double commensurate_delta_nu(double u0, double h, std::size_t n_fft) {
    return 2.0 * M_PI / (u0 * h * static_cast<double>(n_fft));
}

NoisePair noise_series_fft(const BathRealization& bath, double d, double h, std::size_t n,
                           std::size_t n_fft) {
    if (!is_power_of_two(n_fft)) throw std::invalid_argument("noise_series_fft: n_fft not 2^k");
    if (n > n_fft || bath.grid.n_modes > n_fft)
        throw std::invalid_argument("noise_series_fft: n_fft too small");
    const double dnu = bath.grid.delta_nu();
    const double want = commensurate_delta_nu(bath.u0, h, n_fft);
    if (std::abs(dnu - want) > 1e-12 * want)
        throw std::invalid_argument(
            "noise_series_fft: grid not commensurate (dnu != 2 pi / (u0 h n_fft))");

    using cd = std::complex<double>;
    std::vector<cd> A(n_fft, cd(0.0, 0.0));
    std::vector<cd> B(n_fft, cd(0.0, 0.0));
    const std::size_t nm = bath.grid.n_modes;
    for (std::size_t k = 0; k < nm; ++k) {
        const double nu = bath.grid.nu(k);
        const double omega = bath.u0 * nu;
        const double cw = bath.force_weight[k];
        const cd zc(bath.z0[k], -bath.q0[k] / omega);
        const cd yc(bath.y0[k], -bath.p0[k] / omega);
        A[k] = cw * zc;
        B[k] = cw * (yc * std::sin(nu * d) + zc * std::cos(nu * d));
    }
    fft_radix2(A, +1);
    fft_radix2(B, +1);

    NoisePair out;
    out.t0 = 0.0;
    out.h = h;
    out.f1.resize(n);
    out.f2.resize(n);
    const double phase_step = M_PI / static_cast<double>(n_fft);
    for (std::size_t j = 0; j < n; ++j) {
        const double ph = phase_step * static_cast<double>(j);
        const cd rot(std::cos(ph), std::sin(ph));
        out.f1[j] = -(rot * A[j]).real();
        out.f2[j] = -(rot * B[j]).real();
    }
    return out;
}

std::pair<std::vector<double>, std::vector<double>> mode_noises(
    const std::vector<double>& f1, const std::vector<double>& f2) {
    if (f1.size() != f2.size())
        throw std::invalid_argument("mode_noises: series lengths differ (grid mismatch)");
    std::vector<double> fr(f1.size()), fz(f1.size());
    for (std::size_t i = 0; i < f1.size(); ++i) {
        fr[i] = 0.5 * (f1[i] + f2[i]);
        fz[i] = f2[i] - f1[i];
    }
    return {std::move(fr), std::move(fz)};
}

// ------------------------------ FDR targets ----------------------------------

namespace {

// int_0^b w(nu) cos(c1 nu) cos(c2 nu) dnu with oscillation-aware splitting
double finite_cos2_integral(const std::function<double(double)>& w, double c1, double c2,
                            double b, double abs_tol, double rel_tol) {
    auto f = [&](double nu) { return w(nu) * std::cos(c1 * nu) * std::cos(c2 * nu); };
    const double freq = std::abs(c1) + std::abs(c2);
    const double phase = freq * b;
    std::size_t panels = static_cast<std::size_t>(phase / (8.0 * M_PI)) + 1;
    panels = std::min<std::size_t>(panels, 4096);
    const double step = b / static_cast<double>(panels);
    double acc = 0.0;
    const double panel_tol = abs_tol / static_cast<double>(panels);
    for (std::size_t i = 0; i < panels; ++i) {
        acc += integrate_gk(f, step * static_cast<double>(i), step * static_cast<double>(i + 1),
                            panel_tol, rel_tol * 0.1, 4000)
                   .value;
    }
    return acc;
}

} // namespace

double fdr_target(const CouplingModel& model, const ThermalState& thermal, double dt,
                  CovariancePair pair, double d, double nu_max) {
    thermal.validate();
    const bool cross = (pair == CovariancePair::P12);
    const double cd = cross ? d : 0.0;
    const bool infinite = std::isinf(nu_max);

    if (thermal.mode == ThermalMode::Classical) {
        if (infinite) {
            // kT * chi(dt) / kT * chi(dt; d); Ohmic has no pointwise value
            if (model.family == CouplingFamily::Ohmic)
                throw std::invalid_argument(
                    "fdr_target: Ohmic classical target is distributional; supply nu_max");
            return thermal.kT * (cross ? chi_d_smooth(model, dt, d) : chi_smooth(model, dt));
        }
        auto w = [&](double nu) {
            return coupling_strength_sq(model, nu) / (model.u0 * model.u0);
        };
        return thermal.kT *
               finite_cos2_integral(w, model.u0 * dt, cd, nu_max, 1e-12, 1e-9);
    }

    // quantum: (nu^2 g^2 hbar / 2 omega) coth(hbar omega / 2 kT)
    if (infinite && model.family != CouplingFamily::ExponentialCutoff)
        throw std::invalid_argument(
            "fdr_target: quantum target is UV-divergent for this family; supply nu_max");
    auto wq = [&](double nu) {
        if (nu == 0.0) return 0.0;
        const double omega = model.u0 * nu;
        return nu * nu * coupling_strength_sq(model, nu) * thermal.hbar / (2.0 * omega) *
               thermal.coth_factor(omega);
    };
    if (!infinite) return finite_cos2_integral(wq, model.u0 * dt, cd, nu_max, 1e-12, 1e-9);
    // exponential cutoff with full support: integrand decays like nu e^{-nu/nu0}
    const double upper = model.nu0 * 60.0 + 60.0 / std::max(model.u0 * dt + cd, 1.0);
    return finite_cos2_integral(wq, model.u0 * dt, cd, upper, 1e-12, 1e-9);
}

} // namespace bathlab
