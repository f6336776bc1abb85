// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <cstdint>

#include "camsim/common.hpp"

namespace camsim {

/// Philox 4x32-10 counter-based generator block function.
/// Stateless: the same (counter, key) always produces the same block, which
/// makes parallel streams reproducible regardless of scheduling.
inline std::array<uint32_t, 4> philox4x32(std::array<uint32_t, 4> ctr,
                                          std::array<uint32_t, 2> key) {
    constexpr uint32_t kMul0 = 0xD2511F53u;
    constexpr uint32_t kMul1 = 0xCD9E8D57u;
    constexpr uint32_t kW0 = 0x9E3779B9u;
    constexpr uint32_t kW1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        const uint64_t p0 = static_cast<uint64_t>(kMul0) * ctr[0];
        const uint64_t p1 = static_cast<uint64_t>(kMul1) * ctr[2];
        const uint32_t hi0 = static_cast<uint32_t>(p0 >> 32);
        const uint32_t lo0 = static_cast<uint32_t>(p0);
        const uint32_t hi1 = static_cast<uint32_t>(p1 >> 32);
        const uint32_t lo1 = static_cast<uint32_t>(p1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kW0;
        key[1] += kW1;
    }
    return ctr;
}

/// One deterministic random stream addressed by (seed, stream id, element id).
/// The counter layout is {stream_lo, stream_hi, element, block}, so distinct
/// (stream, element) addresses can never collide; `block` advances as the
/// stream is consumed (4 billion blocks per address).
class Rng {
public:
    Rng(uint64_t seed, uint64_t stream, uint32_t element)
        : key_{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32)},
          ctr_{static_cast<uint32_t>(stream), static_cast<uint32_t>(stream >> 32), element, 0} {}

    uint32_t next_u32() {
        if (idx_ == 4) {
            buf_ = philox4x32(ctr_, key_);
            ++ctr_[3];
            idx_ = 0;
        }
        return buf_[idx_++];
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() {
        const uint64_t hi = next_u32();
        const uint64_t lo = next_u32();
        return static_cast<double>(((hi << 32) | lo) >> 11) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller; consumes two uniforms.
    double normal() {
        double u1 = uniform();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * constants::pi * u2);
    }

    /// Poisson sample: exact inversion below mean 50, Gaussian approximation
    /// (rounded, clamped at zero) above.
    long poisson(double mean) {
        if (mean <= 0.0) return 0;
        if (mean < 50.0) {
            const double limit = std::exp(-mean);
            long k = 0;
            double prod = uniform();
            while (prod > limit) {
                ++k;
                prod *= uniform();
            }
            return k;
        }
        const double g = mean + std::sqrt(mean) * normal();
        return g < 0.0 ? 0 : static_cast<long>(std::llround(g));
    }

private:
    std::array<uint32_t, 2> key_;
    std::array<uint32_t, 4> ctr_;
    std::array<uint32_t, 4> buf_{};
    int idx_ = 4;
};

}  // namespace camsim
