#include "hkd/rng.hpp"

#include <cmath>

namespace hkd {

uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

uint64_t substream_seed(uint64_t seed, uint64_t index) {
    uint64_t state = seed ^ (0x517cc1b727220a95ULL * (index + 1));
    uint64_t s = splitmix64(state);
    return splitmix64(state) ^ s;
}

uint64_t Rng::next_below(uint64_t bound) {
    if (bound == 0) return 0;
    // rejection on the top partial block
    uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    uint64_t v;
    do {
        v = engine_();
    } while (v >= limit);
    return v % bound;
}

double Rng::next_normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * next_double() - 1.0;
        v = 2.0 * next_double() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    double mul = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * mul;
    has_spare_ = true;
    return u * mul;
}

BitString Rng::next_bits(size_t n) {
    BitString out = BitString::zeros(n);
    size_t i = 0;
    while (i < n) {
        uint64_t word = engine_();
        for (int b = 63; b >= 0 && i < n; --b, ++i)
            out.set_bit(i, static_cast<uint8_t>((word >> b) & 1));
    }
    return out;
}

}  // namespace hkd
