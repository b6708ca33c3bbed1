#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace mfgexec::rng {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). A draw is a
// pure function of (key, counter), so any (draw site -> counter) layout gives
// reproducibility independent of scheduling, worker count and population size.

namespace detail {

constexpr std::uint32_t kW32A = 0x9E3779B9u;
constexpr std::uint32_t kW32B = 0xBB67AE85u;
constexpr std::uint32_t kM4x32A = 0xD2511F53u;
constexpr std::uint32_t kM4x32B = 0xCD9E8D57u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

}  // namespace detail

inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                               std::array<std::uint32_t, 2> key) {
    using namespace detail;
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kM4x32A, ctr[0], hi0, lo0);
        mulhilo(kM4x32B, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kW32A;
        key[1] += kW32B;
    }
    return ctr;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Noise channels, one stream per (common draw, player, channel).
enum Channel : std::uint32_t { kCommon = 0, kIdioA = 1, kIdioN = 2 };

/// Deterministic stream identifier recorded in ensembles.
inline std::uint64_t stream_id(std::uint64_t master_seed, std::uint32_t common_index,
                               std::uint32_t player_index, std::uint32_t channel) {
    std::uint64_t h = splitmix64(master_seed);
    h = splitmix64(h ^ common_index);
    h = splitmix64(h ^ (static_cast<std::uint64_t>(player_index) << 2 | channel));
    return h;
}

inline double u64_to_unit(std::uint64_t x) {
    // (0,1): top 53 bits, offset by half an ulp so log() never sees 0
    return static_cast<double>(x >> 11) * 0x1.0p-53 + 0x1.0p-54;
}

/// Standard normal for a fully indexed draw site. One Philox block per draw;
/// Box-Muller on the two 64-bit lanes.
inline double standard_normal(std::uint64_t master_seed, std::uint32_t common_index,
                              std::uint32_t player_index, std::uint32_t channel,
                              std::uint32_t step) {
    const std::uint64_t k = splitmix64(master_seed);
    const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(k),
                                              static_cast<std::uint32_t>(k >> 32)};
    const std::array<std::uint32_t, 4> ctr = {common_index, player_index, channel, step};
    const auto r = philox4x32(ctr, key);
    const std::uint64_t a = (static_cast<std::uint64_t>(r[0]) << 32) | r[1];
    const std::uint64_t b = (static_cast<std::uint64_t>(r[2]) << 32) | r[3];
    const double u1 = u64_to_unit(a);
    const double u2 = u64_to_unit(b);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

/// Cached-key variant for hot loops (key derivation hoisted out).
struct KeyedGenerator {
    std::array<std::uint32_t, 2> key;

    explicit KeyedGenerator(std::uint64_t master_seed) {
        const std::uint64_t k = splitmix64(master_seed);
        key = {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
    }

    double normal(std::uint32_t common_index, std::uint32_t player_index, std::uint32_t channel,
                  std::uint32_t step) const {
        const auto r = philox4x32({common_index, player_index, channel, step}, key);
        const std::uint64_t a = (static_cast<std::uint64_t>(r[0]) << 32) | r[1];
        const std::uint64_t b = (static_cast<std::uint64_t>(r[2]) << 32) | r[3];
        return std::sqrt(-2.0 * std::log(u64_to_unit(a))) *
               std::cos(2.0 * std::numbers::pi * u64_to_unit(b));
    }

    /// Both Box-Muller lanes of one block.
    std::array<double, 2> normal_pair(std::uint32_t common_index, std::uint32_t player_index,
                                      std::uint32_t channel, std::uint32_t block) const {
        const auto r = philox4x32({common_index, player_index, channel, block}, key);
        const std::uint64_t a = (static_cast<std::uint64_t>(r[0]) << 32) | r[1];
        const std::uint64_t b = (static_cast<std::uint64_t>(r[2]) << 32) | r[3];
        const double rad = std::sqrt(-2.0 * std::log(u64_to_unit(a)));
        const double ang = 2.0 * std::numbers::pi * u64_to_unit(b);
        return {rad * std::cos(ang), rad * std::sin(ang)};
    }
};

/// Sequentially consumed stream of normals within one (common, player,
/// channel) stream: step 2k uses the cosine lane of block k, step 2k+1 the
/// sine lane. Steps must be visited in order.
struct PairedStream {
    const KeyedGenerator* gen = nullptr;
    std::uint32_t common = 0, player = 0, channel = 0;
    double cache = 0.0;

    double at_step(std::uint32_t step) {
        if ((step & 1u) == 0u) {
            const auto pr = gen->normal_pair(common, player, channel, step >> 1);
            cache = pr[1];
            return pr[0];
        }
        return cache;
    }
};

}  // namespace mfgexec::rng
