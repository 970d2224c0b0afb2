#include <cmath>

#include "doctest.h"

#include "bathlab/gle.hpp"
#include "bathlab/laplace.hpp"
#include "bathlab/quadrature.hpp"

using namespace bathlab;

using cd = std::complex<double>;

TEST_CASE("de Hoog inversion recovers elementary transforms") {
    // undamped sine: poles on the imaginary axis, long horizon
    auto sine = [](cd s) { return 1.0 / (s * s + 1.0); };
    double worst = 0.0;
    for (double t : {0.01, 0.5, 3.0, 10.0, 20.0, 25.0}) {
        worst = std::max(worst, std::abs(inverse_laplace(sine, t) - std::sin(t)));
    }
    CHECK(worst < 1e-9);

    auto decay = [](cd s) { return 1.0 / (s + 2.0); };
    for (double t : {0.1, 1.0, 5.0}) {
        CHECK(inverse_laplace(decay, t) == doctest::Approx(std::exp(-2.0 * t)).epsilon(1e-9));
    }

    auto damped = [](cd s) { return 1.0 / ((s + 0.05) * (s + 0.05) + 4.0); };
    for (double t : {0.2, 7.0, 20.0}) {
        const double want = std::exp(-0.05 * t) * std::sin(2.0 * t) / 2.0;
        CHECK(std::abs(inverse_laplace(damped, t) - want) < 1e-9);
    }
}

TEST_CASE("checked inversion flags nothing on clean images") {
    auto sine = [](cd s) { return 1.0 / (s * s + 1.0); };
    const CheckedInversion r = inverse_laplace_checked(sine, 12.0);
    CHECK_FALSE(r.flagged);
    CHECK(r.check_diff < 1e-8);
}

TEST_CASE("Laplace kernels: Ohmic and Drude closed forms") {
    const CouplingModel ohmic = CouplingModel::ohmic(0.1, 1.0);
    auto [os, oc] = laplace_kernel(ohmic, cd(0.8, 1.3), 2.0);
    CHECK(os == cd(0.05, 0.0));
    const cd expected = 0.05 * std::exp(-cd(0.8, 1.3) * 2.0);
    CHECK(std::abs(oc - expected) < 1e-14);

    const CouplingModel drude = CouplingModel::drude(0.1, 10.0, 1.0);
    const cd s(0.3, 2.0);
    auto [ds, dc] = laplace_kernel(drude, s, 0.0);
    CHECK(std::abs(ds - 1.0 / (s + 10.0)) < 1e-13);
    CHECK(std::abs(dc - ds) < 1e-13); // d -> 0 recovers the self kernel

    // cross kernel against direct numerical transform of the closed-form kernel
    const double d = 1.7;
    auto [self2, cross2] = laplace_kernel(drude, s, d);
    auto integrand = [&](double t) -> cd {
        return chi_d_smooth(drude, t, d) * std::exp(-s * t);
    };
    const cd direct = integrate_gk_complex(integrand, 0.0, 8.0, 1e-13, 1e-11, 20000).value;
    CHECK(std::abs(cross2 - direct) < 1e-9);

    // the removable s = omega_d point is handled smoothly
    auto [s_at, c_at] = laplace_kernel(drude, cd(10.0, 0.0), d);
    auto [s_near, c_near] = laplace_kernel(drude, cd(10.0 + 1e-9, 0.0), d);
    CHECK(std::abs(c_at - c_near) < 1e-10);
    CHECK(std::abs(s_at - s_near) < 1e-10);

    CHECK_THROWS_AS(laplace_kernel(drude, cd(-0.1, 1.0), d), std::invalid_argument);
}

TEST_CASE("Laplace kernel of the exponential-cutoff family by quadrature") {
    const CouplingModel expc = CouplingModel::exponential_cutoff(1.0, 1.0, 1.0);
    const cd s(0.4, 1.1);
    auto [self, cross] = laplace_kernel(expc, s, 2.0);
    auto self_direct = [&](double t) -> cd { return chi_smooth(expc, t) * std::exp(-s * t); };
    auto cross_direct = [&](double t) -> cd {
        return chi_d_smooth(expc, t, 2.0) * std::exp(-s * t);
    };
    // kernel decays ~ t^-4; with Re(s) = 0.4 the tail beyond 60 is negligible
    const cd ds = integrate_gk_complex(self_direct, 0.0, 60.0, 1e-12, 1e-10, 20000).value;
    const cd dc = integrate_gk_complex(cross_direct, 0.0, 60.0, 1e-12, 1e-10, 20000).value;
    CHECK(std::abs(self - ds) < 1e-7);
    CHECK(std::abs(cross - dc) < 1e-7);
}

TEST_CASE("response functions: free-oscillator limit and initial values") {
    const CouplingModel off = CouplingModel::exponential_cutoff(0.0, 1.0, 1.0);
    OscillatorPair pair;
    pair.omega0 = 1.0;
    pair.d = 2.0;
    double worst_eta = 0.0, worst_xi = 0.0;
    for (double t : {0.3, 2.0, 8.0, 20.0}) {
        const ResponseValue r = response_eta_xi(off, pair, +1, t);
        worst_eta = std::max(worst_eta, std::abs(r.eta - std::sin(t)));
        worst_xi = std::max(worst_xi, std::abs(r.xi - std::cos(t)));
    }
    CHECK(worst_eta < 1e-8);
    CHECK(worst_xi < 1e-8);

    const CouplingModel drude = CouplingModel::drude(0.1, 10.0, 1.0);
    for (int sign : {+1, -1}) {
        const ResponseValue r0 = response_eta_xi(drude, pair, sign, 0.0);
        CHECK(r0.eta == 0.0);
        CHECK(r0.xi == 1.0);
    }
}

TEST_CASE("xi = eta' + (chi +- chi_d) * eta (transform identity, spot check)") {
    const CouplingModel drude = CouplingModel::drude(0.2, 5.0, 1.0);
    OscillatorPair pair;
    pair.omega0 = 1.0;
    pair.d = 1.0;
    // verified in the Laplace domain: xi_im = (s + chi) eta_im
    const cd s(0.7, 0.9);
    auto [self, cross] = laplace_kernel(drude, s, pair.d);
    const cd chi_p = self + cross;
    const cd eta_im = 1.0 / (s * s + s * chi_p + 1.0);
    const cd xi_im = (s + chi_p) * eta_im;
    CHECK(std::abs(xi_im * (s * s + s * chi_p + 1.0) - (s + chi_p)) < 1e-14);
}
