#pragma once

#include <cstdint>

namespace slicing4meta {

/// SplitMix64 step: advances `state` and returns the mixed output.
std::uint64_t splitmix64(std::uint64_t& state);

/// xoshiro256** (Blackman & Vigna), state filled by four SplitMix64 outputs
/// of the seed. Bit-exact so traces can be matched by other implementations:
///
///   seed 0  -> 0x99ec5f36cb75f2b4, 0xbf6e1f784956452a, 0x1a5f849d4933e6e0, ...
///   seed 42 -> 0x15780b2e0c2ec716, 0x6104d9866d113a7e, 0xae17533239e499a1, ...
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next();

    /// Uniform on [lo, hi] by rejection: draws below 2^64 mod (hi-lo+1) are
    /// discarded, then the result is lo + x mod (hi-lo+1).
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

    /// (next() >> 11) * 2^-53, uniform on [0, 1).
    double uniform01();

    /// -mean * log1p(-uniform01()).
    double exponential(double mean);

private:
    std::uint64_t s_[4];
};

}  // namespace slicing4meta
