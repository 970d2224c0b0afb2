// fft.hpp — iterative radix-2 complex FFT, power-of-two sizes only.
// Self-contained so results are deterministic across runs and machines.

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace bathlab {

// In-place transform; sign = -1 forward (e^{-i2*pi*kj/n}), +1 inverse kernel.
// No 1/n normalization is applied in either direction.
void fft_radix2(std::vector<std::complex<double>>& data, int sign);

bool is_power_of_two(std::size_t n);

} // namespace bathlab
