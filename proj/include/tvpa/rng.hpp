// rng.hpp — counter-based 64-bit generator with keyed substreams.
//
// Output i of a stream is mix(key, i), so a stream is a pure function of
// (key, counter) and replications can derive independent substreams from
// (master_seed, replication_index) without sharing state. Reproducible
// bit-for-bit within a build.
#pragma once

#include <cstdint>

namespace tvpa {

namespace detail {

// SplitMix64 finalizer (Stafford mix13 variant).
inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

} // namespace detail

class CounterRng {
public:
    explicit CounterRng(std::uint64_t key, std::uint64_t counter = 0)
        : key_(detail::mix64(key + 0x9E3779B97F4A7C15ull)), ctr_(counter) {}

    // Substream `index` of a master seed; streams with distinct indices are
    // keyed independently.
    static CounterRng substream(std::uint64_t master_seed, std::uint64_t index) {
        return CounterRng(master_seed ^ detail::mix64(index * 0xD1B54A32D192ED03ull + 0x8BB84B93962EACC9ull));
    }

    std::uint64_t next_u64() {
        std::uint64_t z = key_ + ctr_ * 0x9E3779B97F4A7C15ull;
        ++ctr_;
        return detail::mix64(z);
    }

    // Uniform double in [0, 1) with 53 random bits.
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [0, n), n > 0. Multiply-shift map; bias is O(n/2^64).
    std::uint64_t next_below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    bool next_bernoulli(double p) { return next_unit() < p; }

private:
    std::uint64_t key_;
    std::uint64_t ctr_;
};

} // namespace tvpa
