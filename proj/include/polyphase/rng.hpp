#pragma once

#include <cstdint>

namespace polyphase {

// Stateless counter-based generator: every variate is a pure function of its
// key, so resampling one row (or one replica) cannot perturb any other draw.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Keyed 64-bit word for the omega table entry (seed, row j, degree q, replica).
inline std::uint64_t key_bits(std::uint64_t seed, std::uint64_t j, std::uint64_t q,
                              std::uint64_t replica) {
    std::uint64_t h = mix64(seed ^ 0x243F6A8885A308D3ull);
    h = mix64(h ^ (j * 0x9E3779B97F4A7C15ull));
    h = mix64(h ^ (q * 0xC2B2AE3D27D4EB4Full));
    h = mix64(h ^ (replica * 0x165667B19E3779F9ull));
    return h;
}

// 53-bit uniform in [0, 1).
inline double uniform01(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace polyphase
