#pragma once

// Philox4x32-10 counter-based generator. A draw is a pure function of
// (key, counter), so streams do not depend on execution order or thread count.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace qvdp {

class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static constexpr Counter generate(Counter ctr, Key key) noexcept {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += 0x9E3779B9u;
                key[1] += 0xBB67AE85u;
            }
            const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * ctr[2];
            const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const auto lo0 = static_cast<std::uint32_t>(p0);
            const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const auto lo1 = static_cast<std::uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        }
        return ctr;
    }

    static constexpr Key key_from_seed(std::uint64_t seed) noexcept {
        return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    }
};

// Uniform in the open interval (0, 1).
constexpr double to_open_unit(std::uint32_t x) noexcept { return (static_cast<double>(x) + 0.5) * 0x1p-32; }

// Four independent standard normals for (seed, stream, index).
inline std::array<double, 4> philox_normals(std::uint64_t seed, std::uint32_t stream, std::uint64_t index) noexcept {
    const Philox4x32::Counter ctr = {static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                                     stream, 0u};
    const auto bits = Philox4x32::generate(ctr, Philox4x32::key_from_seed(seed));
    std::array<double, 4> out{};
    for (int pair = 0; pair < 2; ++pair) {
        const double radius = std::sqrt(-2.0 * std::log(to_open_unit(bits[2 * pair])));
        const double angle = 2.0 * std::numbers::pi * to_open_unit(bits[2 * pair + 1]);
        out[2 * pair] = radius * std::cos(angle);
        out[2 * pair + 1] = radius * std::sin(angle);
    }
    return out;
}

// Four uniforms in (0, 1) for (seed, stream, index).
inline std::array<double, 4> philox_uniforms(std::uint64_t seed, std::uint32_t stream, std::uint64_t index) noexcept {
    const Philox4x32::Counter ctr = {static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                                     stream, 1u};
    const auto bits = Philox4x32::generate(ctr, Philox4x32::key_from_seed(seed));
    return {to_open_unit(bits[0]), to_open_unit(bits[1]), to_open_unit(bits[2]), to_open_unit(bits[3])};
}

} // namespace qvdp
