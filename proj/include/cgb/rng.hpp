// SPDX-License-Identifier: Apache-2.0

#ifndef CGB_RNG_HPP
#define CGB_RNG_HPP

#include <array>
#include <cstdint>

namespace cgb {

/// Philox4x32-10 counter-based generator (Salmon et al., Random123). The
/// output is a pure function of (counter, key), so any ball's stream can be
/// produced independently of every other.
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter generate(Counter ctr, Key key) {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kWeyl0;
                key[1] += kWeyl1;
            }
            ctr = single_round(ctr, key);
        }
        return ctr;
    }

private:
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    static Counter single_round(const Counter& c, const Key& k) {
        std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c[0];
        std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c[2];
        auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        auto lo0 = static_cast<std::uint32_t>(p0);
        auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        auto lo1 = static_cast<std::uint32_t>(p1);
        return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    }
};

/// Sequential view over one Philox stream: key from the seed, counter
/// words (stream_lo, stream_hi, block_lo, block_hi).
class StreamRng {
public:
    StreamRng(std::uint64_t seed, std::uint64_t stream)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          stream_(stream) {}

    std::uint64_t next_u64() {
        if (lane_ == 2) {
            refill();
        }
        std::uint64_t v = (static_cast<std::uint64_t>(buffer_[2 * lane_ + 1]) << 32) | buffer_[2 * lane_];
        ++lane_;
        return v;
    }

    /// Uniform on [0, 1) with 53 random bits.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

private:
    void refill() {
        Philox4x32::Counter ctr{static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32),
                                static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32)};
        buffer_ = Philox4x32::generate(ctr, key_);
        ++block_;
        lane_ = 0;
    }

    Philox4x32::Key key_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    Philox4x32::Counter buffer_{};
    int lane_ = 2;
};

} // namespace cgb

#endif // CGB_RNG_HPP
