#pragma once

#include <cstdint>

namespace shtukalab {

/// Deterministic splitmix64 generator. All randomized suites draw from this so
/// that counterexamples replay bit-identically across platforms and runs:
///   state += 0x9e3779b97f4a7c15
///   z = state; z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9
///   z = (z ^ (z >> 27)) * 0x94d049bb133111eb
///   output = z ^ (z >> 31)
/// Bounded draws are next() % n.
struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        state += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t below(std::uint64_t n) { return n ? next() % n : 0; }

    /// Derive an independent stream (for per-sample replay).
    Rng fork(std::uint64_t salt) { return Rng(next() ^ (salt * 0xd1342543de82ef95ULL + 1)); }
};

} // namespace shtukalab
