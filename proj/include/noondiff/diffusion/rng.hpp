#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). Every draw is
// a pure function of (key, counter), so walkers can be evolved in any order
// and on any number of threads with identical results.
namespace noondiff::diffusion {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

inline PhiloxCounter philox4x32(PhiloxCounter ctr, PhiloxKey key) {
    constexpr std::uint32_t kM0 = 0xD2511F53u;
    constexpr std::uint32_t kM1 = 0xCD9E8D57u;
    constexpr std::uint32_t kW0 = 0x9E3779B9u;
    constexpr std::uint32_t kW1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * ctr[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * ctr[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kW0;
        key[1] += kW1;
    }
    return ctr;
}

inline PhiloxKey philox_key(std::uint64_t seed) {
    return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
}

// Uniform in the open interval (0, 1).
inline double to_unit_open(std::uint32_t x) { return (static_cast<double>(x) + 0.5) * 0x1.0p-32; }

// Four independent standard normals from one counter (two Box-Muller pairs).
inline std::array<double, 4> normals4(PhiloxKey key, PhiloxCounter ctr) {
    const PhiloxCounter r = philox4x32(ctr, key);
    std::array<double, 4> out{};
    for (int pair = 0; pair < 2; ++pair) {
        const double radius = std::sqrt(-2.0 * std::log(to_unit_open(r[2 * pair])));
        const double angle = 2.0 * std::numbers::pi * to_unit_open(r[2 * pair + 1]);
        out[2 * pair] = radius * std::cos(angle);
        out[2 * pair + 1] = radius * std::sin(angle);
    }
    return out;
}

// Counter purposes, kept distinct so no two consumers share draws.
enum class DrawPurpose : std::uint32_t { Brownian = 1, Bootstrap = 2, Noise = 3, InitialPosition = 4 };

inline PhiloxCounter make_counter(std::uint32_t walker, std::uint32_t block, std::uint32_t stream, DrawPurpose purpose) {
    return {walker, block, stream, static_cast<std::uint32_t>(purpose)};
}

}  // namespace noondiff::diffusion
