#pragma once

#include <cstdint>
#include <random>

#include "hkd/bitstring.hpp"

namespace hkd {

uint64_t splitmix64(uint64_t& state);

/// Derives a stream seed from (seed, index); used for per-period and per-side
/// substreams so replay does not depend on evaluation order.
uint64_t substream_seed(uint64_t seed, uint64_t index);

/// Deterministic generator. The engine is std::mt19937_64 (bit-exact per the
/// standard); the uniform/normal transforms are fixed here rather than taken
/// from std distributions, whose output sequences are implementation-defined.
class Rng {
public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1) with 53-bit resolution.
    double next_double() { return (engine_() >> 11) * 0x1.0p-53; }

    /// Uniform in [0, bound) without modulo bias.
    uint64_t next_below(uint64_t bound);

    /// Standard normal via the Marsaglia polar method.
    double next_normal();

    bool next_bit() { return (engine_() >> 63) != 0; }

    BitString next_bits(size_t n);

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace hkd
