#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace she {

/// Philox-4x32-10 counter-based generator (Salmon et al., SC'11).
/// A block is a pure function of (key, counter), so any lattice cell or
/// replicate can be generated independently and reproducibly.
namespace philox {

constexpr std::uint32_t kW32A = 0x9E3779B9u;
constexpr std::uint32_t kW32B = 0xBB67AE85u;
constexpr std::uint32_t kM4x32A = 0xD2511F53u;
constexpr std::uint32_t kM4x32B = 0xCD9E8D57u;

using Counter = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;

inline void round_once(Counter& c, const Key& k) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kM4x32A) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kM4x32B) * c[2];
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

inline Counter block(Counter c, Key k) {
    for (int i = 0; i < 10; ++i) {
        round_once(c, k);
        k[0] += kW32A;
        k[1] += kW32B;
    }
    return c;
}

}  // namespace philox

/// Two independent standard normal draws from one Philox block, keyed by
/// a 64-bit seed and a 96-bit index (stream, hi, lo). Box-Muller on
/// open-interval uniforms.
inline std::array<double, 2> normal_pair(std::uint64_t seed, std::uint32_t stream,
                                         std::uint32_t hi, std::uint32_t lo) {
    const philox::Key key = {static_cast<std::uint32_t>(seed),
                             static_cast<std::uint32_t>(seed >> 32)};
    const philox::Counter ctr = {lo, hi, stream, 0x5e0c0deu};
    const philox::Counter out = philox::block(ctr, key);
    // uniforms in (0, 1]; u1 > 0 so the log is finite
    const double inv = 1.0 / 4294967296.0;
    const double u1 = (static_cast<double>(out[0]) + 1.0) * inv;
    const double u2 = (static_cast<double>(out[1]) + 0.5) * inv;
    const double rad = std::sqrt(-2.0 * std::log(u1));
    const double ang = 6.283185307179586477 * u2;
    return {rad * std::cos(ang), rad * std::sin(ang)};
}

/// Single uniform in [0,1) for utility sampling (bootstrap resampling etc.).
inline double uniform01(std::uint64_t seed, std::uint32_t stream, std::uint32_t hi,
                        std::uint32_t lo) {
    const philox::Key key = {static_cast<std::uint32_t>(seed),
                             static_cast<std::uint32_t>(seed >> 32)};
    const philox::Counter ctr = {lo, hi, stream, 0x9u};
    const philox::Counter out = philox::block(ctr, key);
    return static_cast<double>(out[0]) / 4294967296.0;
}

}  // namespace she
