#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace rtoff {

// Deterministic random source. The engine is mt19937_64 (bit-exact across
// platforms per the standard) and all transforms are written out explicitly
// instead of using std:: distributions, whose streams are implementation
// defined. Identical seed plus identical draw sequence gives a bit-identical
// sample stream.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in (0, 1], 53-bit resolution. Never returns 0, so logs are safe.
    double uniform01() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    // Box-Muller; one fresh pair of uniforms per call, second value discarded
    // so the draw count per call is fixed.
    double normal(double mean, double stddev) {
        if (stddev <= 0.0)
            return mean;
        double u1 = uniform01();
        double u2 = uniform01();
        double r = std::sqrt(-2.0 * std::log(u1));
        return mean + stddev * r * std::cos(2.0 * 3.141592653589793238462643383279502884 * u2);
    }

    // Inverse-CDF exponential with the given mean.
    double exponential(double mean) {
        return -mean * std::log(uniform01());
    }

private:
    std::mt19937_64 engine_;
};

} // namespace rtoff
