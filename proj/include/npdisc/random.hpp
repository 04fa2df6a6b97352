#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace npdisc {

/// SplitMix64 indexed by an explicit counter: draw i depends only on
/// (seed, i), so any sample can be regenerated from the recorded seed.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t counter = 0) : seed_(seed), counter_(counter) {}

    static std::uint64_t mix(std::uint64_t seed, std::uint64_t counter)
    {
        std::uint64_t z = seed + (counter + 1) * 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t next_u64() { return mix(seed_, counter_++); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform in the closed disc of the given radius.
    std::complex<double> in_disc(double radius)
    {
        const double rho = radius * std::sqrt(uniform());
        const double t = 2.0 * 3.141592653589793238462643383279502884 * uniform();
        return std::polar(rho, t);
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t seed_;
    std::uint64_t counter_;
};

}  // namespace npdisc
