#pragma once

#include <cstdint>
#include <limits>

namespace aloha {

// murmur3 fmix64 finalizer; bijective with full avalanche.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 33;
    z *= 0xff51afd7ed558ccdULL;
    z ^= z >> 33;
    z *= 0xc4ceb9fe1a85ec53ULL;
    z ^= z >> 33;
    return z;
}

// Draw-type tags for stream derivation. Every random draw in the toolkit
// gets its seed from derive_stream(master, a, b, tag), so the value of a
// draw depends only on its coordinates, never on evaluation order.
enum class StreamTag : std::uint64_t {
    Arrival = 1,
    Window = 2,
    Replication = 3,
    WitnessStart = 4,
    ScanRow = 5,
};

// Avalanche mix of (seed, a, b, tag) -> 64-bit stream seed. a is the slot
// index, b the user index (or replication/start counters, per tag).
constexpr std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t a,
                                      std::uint64_t b, StreamTag tag) {
    std::uint64_t h = mix64(seed ^ 0x6a09e667f3bcc909ULL);
    h = mix64(h ^ (a * 0x9e3779b97f4a7c15ULL));
    h = mix64(h ^ (b * 0xc2b2ae3d27d4eb4fULL));
    h = mix64(h ^ (static_cast<std::uint64_t>(tag) * 0x165667b19e3779f9ULL));
    return h;
}

// splitmix64: tiny counter-based generator. Passed by value; a draw is a
// pure function of the state it starts from.
struct SplitMix64 {
    std::uint64_t state = 0;

    using result_type = std::uint64_t;
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() {
        return std::numeric_limits<std::uint64_t>::max();
    }

    constexpr std::uint64_t operator()() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
};

// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(SplitMix64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace aloha
