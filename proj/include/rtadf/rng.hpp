#pragma once

#include <cmath>
#include <cstdint>

namespace rtadf {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t rotl64(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

}  // namespace detail

// Stream domains keep replication streams, generator streams and fixture
// streams from aliasing each other under one master seed.
enum class StreamDomain : std::uint64_t {
    mc_replication = 1,
    generator = 2,
};

// xoshiro256++ with splitmix64 state seeding (Blackman & Vigna, public domain).
//
// Every consumer derives its stream from (master seed, domain, stream index)
// alone, so replications are independent of scheduling and worker count, and
// identical seeds reproduce bit-identical draws. Draw accounting is fixed:
// one normal always consumes exactly two uniforms (Box-Muller, cosine
// branch), one Bernoulli consumes one uniform.
class Rng {
public:
    static Rng from_stream(std::uint64_t seed, StreamDomain domain, std::uint64_t index) {
        std::uint64_t st = seed;
        st += 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(domain) * 0x100000001B3ULL +
                                       index + 1);
        Rng rng;
        bool all_zero = true;
        for (auto& word : rng.state_) {
            word = detail::splitmix64(st);
            all_zero = all_zero && word == 0;
        }
        if (all_zero) rng.state_[0] = 1;
        return rng;
    }

    std::uint64_t next_u64() {
        std::uint64_t* s = state_;
        const std::uint64_t result = detail::rotl64(s[0] + s[3], 23) + s[0];
        const std::uint64_t t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = detail::rotl64(s[3], 45);
        return result;
    }

    // Uniform on [0, 1), 53-bit resolution.
    double next_uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double next_normal() {
        const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
        const double u2 = next_uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    bool next_bernoulli(double p) {
        return next_uniform01() < p;
    }

private:
    std::uint64_t state_[4] = {0, 0, 0, 1};
};

}  // namespace rtadf
