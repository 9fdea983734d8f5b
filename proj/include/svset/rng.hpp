#pragma once

#include <array>
#include <cstdint>

#include "svset/common.hpp"

namespace svset {

// Philox4x32-10 counter-based generator. A block is a pure function of
// (key, counter), so any substream can be regenerated from its coordinates
// alone; substreams are addressed as (seed, stream, sample) with the block
// index in the low counter words.
namespace philox {

inline constexpr std::uint32_t M0 = 0xD2511F53u;
inline constexpr std::uint32_t M1 = 0xCD9E8D57u;
inline constexpr std::uint32_t W0 = 0x9E3779B9u;
inline constexpr std::uint32_t W1 = 0xBB67AE85u;

inline std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                          std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            key[0] += W0;
            key[1] += W1;
        }
        const std::uint64_t p0 = static_cast<std::uint64_t>(M0) * ctr[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(M1) * ctr[2];
        const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
        const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
}

}  // namespace philox

class Substream {
  public:
    Substream(std::uint64_t seed, std::uint32_t stream, std::uint32_t sample)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          sample_(sample),
          stream_(stream) {}

    std::uint64_t next_u64() {
        if (have_ == 0) refill();
        --have_;
        std::uint64_t w = buf_[1 - have_];
        return w;
    }

    // uniform on (0,1], 53-bit resolution
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    // standard normal via Box-Muller on one block-derived pair; the second
    // member of the pair is cached
    double next_normal() {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        double u1 = next_uniform();
        double u2 = next_uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double th = 2.0 * M_PI * u2;
        cached_ = r * std::sin(th);
        has_cached_ = true;
        return r * std::cos(th);
    }

  private:
    void refill() {
        auto out = philox::block({static_cast<std::uint32_t>(block_),
                                  static_cast<std::uint32_t>(block_ >> 32), sample_, stream_},
                                 key_);
        buf_[0] = (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
        buf_[1] = (static_cast<std::uint64_t>(out[3]) << 32) | out[2];
        ++block_;
        have_ = 2;
    }

    std::array<std::uint32_t, 2> key_;
    std::uint32_t sample_;
    std::uint32_t stream_;
    std::uint64_t block_ = 0;
    std::uint64_t buf_[2] = {0, 0};
    int have_ = 0;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

// Convenience wrapper over one substream for seeded test-data generation.
class Rand {
  public:
    Rand(std::uint64_t seed, std::uint32_t stream) : ss_(seed, stream, 0) {}

    double uniform(double lo, double hi) { return lo + (hi - lo) * ss_.next_uniform(); }

    // inclusive bounds
    int uniform_int(int lo, int hi) {
        return lo + static_cast<int>(ss_.next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    bool coin() { return ss_.next_u64() & 1u; }

  private:
    Substream ss_;
};

}  // namespace svset
