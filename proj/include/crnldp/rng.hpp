#pragma once

#include <cmath>
#include <cstdint>

namespace crnldp {

/// Counter-based 64-bit generator: output j of stream (seed, stream) is a
/// stateless SplitMix64-style hash of the triple. Replicas draw from disjoint
/// streams, so results do not depend on scheduling order.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : key_(mix(mix(seed + 0x9e3779b97f4a7c15ull) ^ mix(stream + 0xbf58476d1ce4e5b9ull))) {}

    std::uint64_t next_u64() { return mix(key_ + counter_++ * 0x9e3779b97f4a7c15ull); }

    /// Uniform double in [0, 1).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in (0, 1], safe as a log argument.
    double next_double_open() { return 1.0 - next_double(); }

    double next_exponential(double rate) { return -std::log(next_double_open()) / rate; }

    double next_uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    /// Standard normal via Box-Muller.
    double next_normal() {
        double u1 = next_double_open();
        double u2 = next_double();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace crnldp
