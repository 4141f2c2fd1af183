#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace tailsim::rng {

// SplitMix64 finalizer; full-period bijection on 64-bit ints.
inline std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Substream kinds for the counter-based seed split. Keeping arrival streams
// independent of everything else means changing n or the policy never
// perturbs the arrival sequences.
enum class StreamKind : std::uint64_t {
    Arrival = 1,
    ChunkSize = 2,
    Subset = 3,
    Service = 4,
    Catalog = 5,
    Bootstrap = 6,
};

inline std::uint64_t derive(std::uint64_t seed, StreamKind kind, std::uint64_t index) {
    return mix(mix(seed ^ mix(static_cast<std::uint64_t>(kind))) ^ index);
}

inline std::uint64_t derive2(std::uint64_t seed, StreamKind kind, std::uint64_t a, std::uint64_t b) {
    return mix(derive(seed, kind, a) ^ mix(b));
}

// Maps a 64-bit word to the open interval (0,1); never returns 0 or 1.
inline double open_unit(std::uint64_t z) {
    return (static_cast<double>(z >> 11) + 0.5) * 0x1.0p-53;
}

// Stateful stream for call sites that need a sequence of variates.
class Stream {
public:
    explicit Stream(std::uint64_t seed) : gen_(seed) {}

    double uniform() { return open_unit(gen_()); }

    double exponential(double rate) { return -std::log(uniform()) / rate; }

    std::mt19937_64 &generator() { return gen_; }

private:
    std::mt19937_64 gen_;
};

}  // namespace tailsim::rng
