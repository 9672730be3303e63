#pragma once

#include <cstdint>

// Counter-based deterministic random streams. Draws are keyed by
// (seed, k1, k2, k3) with no shared generator state, so concurrent
// scenario runs and window re-solves stay reproducible bit-for-bit
// on any platform (std::normal_distribution is implementation-defined,
// so it is not used anywhere).

namespace csched::rng {

constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t keyed(std::uint64_t seed, std::uint64_t k1,
                              std::uint64_t k2 = 0, std::uint64_t k3 = 0) {
    return mix64(seed ^ mix64(k1 ^ mix64(k2 ^ mix64(k3))));
}

// Uniform in [0,1) with 53 random bits.
constexpr double uniform01(std::uint64_t h) {
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

// +1 or -1, fair.
constexpr int sign_pm1(std::uint64_t h) {
    return (h & 1u) ? +1 : -1;
}

// Inverse standard-normal CDF, accurate to ~1e-15 over (0,1).
double norm_quantile(double p);

// Standard normal draw from a hashed counter.
inline double normal(std::uint64_t h) {
    // keep u strictly inside (0,1)
    const double u = (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
    return norm_quantile(u);
}

}  // namespace csched::rng
