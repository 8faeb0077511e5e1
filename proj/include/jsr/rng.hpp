#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace jsr {

/// Philox4x32-10 counter-based generator.
///
/// Streams are addressed, not seeded: the 64-bit key plus the two high counter
/// words pick an independent stream, and the low 64 counter bits walk along it.
/// Output for a given (key, counter) is a pure function, so trials can be
/// generated on any thread in any order without changing the numbers.
class Philox4x32 {
public:
    using Block = std::array<std::uint32_t, 4>;

    Philox4x32(std::uint64_t key, std::uint32_t stream_hi, std::uint32_t stream_lo)
        : key_{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)},
          stream_lo_(stream_lo),
          stream_hi_(stream_hi) {}

    /// One keyed permutation of a 128-bit counter (10 rounds).
    static Block block(const Block& counter, std::uint32_t key_lo, std::uint32_t key_hi) {
        Block x = counter;
        std::uint32_t k0 = key_lo;
        std::uint32_t k1 = key_hi;
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                k0 += 0x9E3779B9u;
                k1 += 0xBB67AE85u;
            }
            const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * x[0];
            const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * x[2];
            const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const auto lo0 = static_cast<std::uint32_t>(p0);
            const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const auto lo1 = static_cast<std::uint32_t>(p1);
            x = Block{hi1 ^ x[1] ^ k0, lo1, hi0 ^ x[3] ^ k1, lo0};
        }
        return x;
    }

    std::uint32_t next_u32() {
        if (pos_ == 4) {
            buffer_ = block({static_cast<std::uint32_t>(block_index_),
                             static_cast<std::uint32_t>(block_index_ >> 32), stream_lo_, stream_hi_},
                            key_[0], key_[1]);
            ++block_index_;
            pos_ = 0;
        }
        return buffer_[pos_++];
    }

    std::uint64_t next_u64() {
        const std::uint64_t lo = next_u32();
        const std::uint64_t hi = next_u32();
        return lo | (hi << 32);
    }

    /// Uniform double in (0, 1].
    double next_unit() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    /// Uniform integer in [0, bound), bias-free via threshold rejection.
    std::uint32_t next_below(std::uint32_t bound) {
        const std::uint32_t threshold = (0u - bound) % bound;
        for (;;) {
            const std::uint32_t v = next_u32();
            if (v >= threshold) return v % bound;
        }
    }

    /// Standard normal via Box-Muller; pairs are cached.
    double next_gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = next_unit();
        const double u2 = next_unit();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * M_PI * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    std::array<std::uint32_t, 2> key_;
    std::uint32_t stream_lo_ = 0;
    std::uint32_t stream_hi_ = 0;
    std::uint64_t block_index_ = 0;
    Block buffer_{};
    int pos_ = 4;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace jsr
