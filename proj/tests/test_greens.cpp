#include <cmath>
#include <initializer_list>

#include "doctest.h"

#include "bathlab/greens.hpp"

using namespace bathlab;

TEST_CASE("jump conditions and causality") {
    CHECK(greens_function(0.1, 1.0, 0.0) == 0.0);
    CHECK(greens_function_dot(0.1, 1.0, 0.0) == 1.0);
    CHECK(greens_function(0.1, 1.0, -0.5) == 0.0);
}

TEST_CASE("undamped limit is sin(w t)/w") {
    for (double t : {0.1, 1.0, 7.0}) {
        CHECK(greens_function(0.0, 2.0, t) ==
              doctest::Approx(std::sin(2.0 * t) / 2.0).epsilon(1e-14));
    }
}

TEST_CASE("ODE residual vanishes on all damping branches") {
    for (double gamma : {0.1, 1.0, 3.999, 4.0, 4.0001, 12.0}) {
        const double w0 = 1.0;
        double worst = 0.0;
        for (int i = 1; i <= 300; ++i) {
            const double t = 15.0 * i / 300.0;
            const double g = greens_function(gamma, w0, t);
            const double gd = greens_function_dot(gamma, w0, t);
            const double gdd = greens_function_ddot(gamma, w0, t);
            worst = std::max(worst, std::abs(gdd + 0.5 * gamma * gd + w0 * w0 * g));
        }
        CHECK(worst < 1e-8);
    }
}

TEST_CASE("analytic derivatives agree with finite differences") {
    const double gamma = 0.3, w0 = 1.3, dt = 1e-6;
    for (double t : {0.5, 2.0, 9.0}) {
        const double fd = (greens_function(gamma, w0, t + dt) -
                           greens_function(gamma, w0, t - dt)) /
                          (2.0 * dt);
        CHECK(greens_function_dot(gamma, w0, t) == doctest::Approx(fd).epsilon(1e-7));
        const double fdd = (greens_function_dot(gamma, w0, t + dt) -
                            greens_function_dot(gamma, w0, t - dt)) /
                           (2.0 * dt);
        CHECK(greens_function_ddot(gamma, w0, t) == doctest::Approx(fdd).epsilon(1e-6));
    }
}
