// rng.hpp — seedable, splittable random streams with a stdlib-independent
// normal transform so realizations are reproducible bit-for-bit.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace bathlab {

// Generator contract string recorded in provenance.
inline constexpr const char* kRngName = "splitmix64/mt19937_64/boxmuller-v1";

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Derives an independent stream seed from (master seed, stream index).
inline std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t s = master;
    std::uint64_t a = splitmix64(s);
    s ^= index * 0xd1b54a32d192ed03ULL + 0x2545f4914f6cdd1dULL;
    std::uint64_t b = splitmix64(s);
    return a ^ (b + 0x9e3779b97f4a7c15ULL + (index << 1));
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    static Rng stream(std::uint64_t master, std::uint64_t index) {
        return Rng(derive_stream_seed(master, index));
    }

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in (0,1]; 53-bit mantissa, never exactly 0 so log() is safe.
    double uniform() {
        return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; pair cached.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace bathlab
