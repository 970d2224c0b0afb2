#include <cmath>

#include "doctest.h"

#include "bathlab/induced.hpp"
#include "bathlab/quadrature.hpp"
#include "bathlab/rng.hpp"

using namespace bathlab;

namespace {
const CouplingModel kExp = CouplingModel::exponential_cutoff(1.0, 1.0, 1.0);
const CouplingModel kDrude = CouplingModel::drude(0.1, 10.0, 1.0);
const CouplingModel kOhmic = CouplingModel::ohmic(0.1, 1.0);
constexpr double kD = 2.0;
} // namespace

TEST_CASE("exponential-cutoff potential closed form") {
    CHECK(induced_potential(kExp, 2.0, kD) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(induced_potential(kExp, 3.0, kD) == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(std::abs(induced_potential(kExp, 1e8, kD)) < 1e-15);
    CHECK(std::abs(induced_potential(kExp, -1e8, kD)) < 1e-15);
    // even about u12 = d
    for (double delta : {0.3, 1.7, 5.0}) {
        CHECK(induced_potential(kExp, kD + delta, kD) ==
              doctest::Approx(induced_potential(kExp, kD - delta, kD)).epsilon(1e-14));
    }
}

TEST_CASE("force equals the printed closed form and vanishes at the minimum") {
    CHECK(induced_force(kExp, 2.0, kD) == 0.0);
    CHECK(induced_force(kExp, 3.0, kD) == doctest::Approx(-0.5).epsilon(1e-15));
    for (double delta : {0.2, 1.1, 4.0}) {
        CHECK(induced_force(kExp, kD + delta, kD) ==
              doctest::Approx(-induced_force(kExp, kD - delta, kD)).epsilon(1e-14));
    }
}

TEST_CASE("force is minus the potential gradient (finite differences)") {
    Rng rng(99);
    const double step = 1e-5;
    for (int i = 0; i < 50; ++i) {
        const double u = kD + 16.0 * (rng.uniform() - 0.5);
        for (const CouplingModel* m : {&kExp, &kDrude}) {
            const double fd = -(induced_potential(*m, u + step, kD) -
                                induced_potential(*m, u - step, kD)) /
                              (2.0 * step);
            CHECK(induced_force(*m, u, kD) ==
                  doctest::Approx(fd).epsilon(1e-6).scale(std::max(1.0, std::abs(fd))));
        }
    }
}

TEST_CASE("exponential-cutoff potential matches its defining integral") {
    for (double u : {-8.0, -1.0, 0.0, 1.5, 2.0, 3.3, 9.0, 12.0}) {
        const double quad = induced_potential_quadrature_exp(kExp, u, kD);
        CHECK(induced_potential(kExp, u, kD) == doctest::Approx(quad).epsilon(1e-7));
    }
}

TEST_CASE("Drude potential: regularized closed form") {
    const double lam = kDrude.lambda_d();
    const double g = kDrude.gamma * kDrude.u0;
    // normalization: V(d) = -gamma u0 lambda_D
    CHECK(induced_potential(kDrude, kD, kD) == doctest::Approx(-g * lam).epsilon(1e-14));
    // frozen regression values of the regularized form
    CHECK(induced_potential(kDrude, kD + 0.05, kD) ==
          doctest::Approx(g * (0.05 + lam * std::expm1(-0.5)) - g * lam).epsilon(1e-12));
    CHECK(induced_potential(kDrude, kD + 1.0, kD) ==
          doctest::Approx(g * (1.0 + lam * std::expm1(-10.0)) - g * lam).epsilon(1e-12));

    // potential differences agree with the regularized defining integral
    //   V(w2) - V(w1) = -(2 g u0/pi) int [cos(nu w2) - cos(nu w1)] / (nu^2 (1+lam^2 nu^2)) dnu
    const double w1 = 0.3, w2 = 1.1;
    auto integrand = [&](double nu) {
        const double wgt = 1.0 / (nu * nu * (1.0 + lam * lam * nu * nu));
        return (std::cos(nu * w2) - std::cos(nu * w1)) * wgt;
    };
    double integral = integrate_gk(integrand, 1e-9, 50.0, 1e-12, 1e-10, 20000).value;
    // oscillatory remainder out to where the envelope is negligible
    double lo = 50.0;
    for (int k = 0; k < 2000 && lo < 4000.0; ++k) {
        const double hi = lo + M_PI / std::max(w1, w2);
        integral += integrate_gk(integrand, lo, hi, 1e-13, 1e-10, 2000).value;
        lo = hi;
    }
    const double pref = -2.0 * kDrude.gamma * kDrude.u0 / M_PI;
    const double diff_quad = pref * integral;
    const double diff_closed =
        induced_potential(kDrude, kD + w2, kD) - induced_potential(kDrude, kD + w1, kD);
    CHECK(diff_closed == doctest::Approx(diff_quad).epsilon(1e-5));
}

TEST_CASE("Ohmic spectrum is rejected as non-integrable") {
    CHECK_THROWS_AS(induced_potential(kOhmic, 1.0, kD), DivergentSpectrumError);
    CHECK_THROWS_AS(induced_force(kOhmic, 1.0, kD), DivergentSpectrumError);
    CHECK_THROWS_AS(induced_drift(kOhmic, 1.0), DivergentSpectrumError);
}

TEST_CASE("noise drift cancels the induced force at frozen positions") {
    // with x1 = x2 = 0 and x(0) = 0 the drift minus dV/dx1 reduces to D(0) = 0
    for (const CouplingModel* m : {&kExp, &kDrude}) {
        const double drift1 = induced_drift(*m, 0.0) + induced_drift(*m, -kD);
        const double dV1 = induced_drift(*m, -kD);
        CHECK(std::abs(drift1 - dV1) < 1e-10);
        const double drift2 = induced_drift(*m, 0.0) + induced_drift(*m, kD);
        const double dV2 = -induced_drift(*m, -kD); // dV/dx2 = -D(u12 - d)
        CHECK(std::abs(drift2 - dV2) < 1e-10);
    }
    // drift is the gradient of V: D(w) = dV/du at u = w + d
    for (double w : {-2.0, -0.3, 0.0, 0.6, 3.0}) {
        const double step = 1e-6;
        const double dv = (induced_potential(kExp, kD + w + step, kD) -
                           induced_potential(kExp, kD + w - step, kD)) /
                          (2.0 * step);
        CHECK(induced_drift(kExp, w) == doctest::Approx(dv).epsilon(1e-7));
    }
}
