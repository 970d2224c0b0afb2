#include <cmath>
#include <complex>

#include "doctest.h"

#include "bathlab/fft.hpp"
#include "bathlab/rng.hpp"

using namespace bathlab;

TEST_CASE("radix-2 FFT matches a direct DFT") {
    const std::size_t n = 64;
    Rng rng(7);
    std::vector<std::complex<double>> data(n);
    for (auto& v : data) v = {rng.normal(), rng.normal()};
    auto ref = data;
    fft_radix2(data, -1);
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> acc(0.0, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            const double ang = -2.0 * M_PI * static_cast<double>(k * j) / static_cast<double>(n);
            acc += ref[j] * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        CHECK(std::abs(data[k] - acc) < 1e-10);
    }
}

TEST_CASE("FFT round trip recovers the input") {
    const std::size_t n = 256;
    Rng rng(11);
    std::vector<std::complex<double>> data(n);
    for (auto& v : data) v = {rng.uniform(), rng.uniform()};
    auto ref = data;
    fft_radix2(data, -1);
    fft_radix2(data, +1);
    for (std::size_t i = 0; i < n; ++i)
        CHECK(std::abs(data[i] / static_cast<double>(n) - ref[i]) < 1e-12);

    std::vector<std::complex<double>> bad(100);
    CHECK_THROWS_AS(fft_radix2(bad, -1), std::invalid_argument);
}

TEST_CASE("rng streams are reproducible and index-independent") {
    Rng a = Rng::stream(42, 3);
    Rng b = Rng::stream(42, 3);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

    Rng c = Rng::stream(42, 4);
    bool any_diff = false;
    Rng a2 = Rng::stream(42, 3);
    for (int i = 0; i < 32; ++i) any_diff |= (a2.next_u64() != c.next_u64());
    CHECK(any_diff);
}

TEST_CASE("normal draws have the right first moments") {
    Rng rng(123);
    const int n = 200000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = rng.normal();
        s += x;
        s2 += x * x;
    }
    const double mean = s / n;
    const double var = s2 / n - mean * mean;
    CHECK(std::abs(mean) < 0.01);
    CHECK(var == doctest::Approx(1.0).epsilon(0.02));
}
