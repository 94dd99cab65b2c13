#pragma once

#include <cstdint>
#include <initializer_list>

namespace ghosttrack {

// splitmix64 finalizer
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Order-sensitive hash of a list of words; used to derive independent RNG streams.
constexpr std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts) {
    std::uint64_t h = 0x6a09e667f3bcc909ULL;
    for (std::uint64_t p : parts) h = mix64(h ^ mix64(p));
    return h;
}

/// Uniform double in [0, 1) from the top 53 bits of a 64-bit engine output.
template <typename Engine>
double uniform01(Engine& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace ghosttrack
