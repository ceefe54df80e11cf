#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace brw {

// SplitMix64 finalizer. Used to derive independent per-trial streams from a
// single master seed so trials are order-independent and parallel-safe.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Stream seed for (master, a, b). Documented split function: trials use
// a = trial index; sweeps use b = grid index.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) {
    std::uint64_t z = mix64(master);
    z = mix64(z ^ mix64(a + 0x165667b19e3779f9ULL));
    z = mix64(z ^ mix64(b + 0xd1b54a32d192ed03ULL));
    return z;
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // uniform in (0,1]; never returns 0 so -log(u) is finite
    double uniform_pos() {
        return static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53;
    }

    // uniform in [0,1)
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    std::uint64_t bits() { return gen_(); }

    // inverse-transform exponential with the given rate
    double exponential(double rate);

private:
    std::mt19937_64 gen_;
};

inline double Rng::exponential(double rate) {
    return -std::log(uniform_pos()) / rate;
}

} // namespace brw
