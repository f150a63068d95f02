#include "hkd/bigint.hpp"

#include <stdexcept>
#include <vector>

namespace hkd {

namespace {

constexpr int kPrimeGenRetryCap = 100000;

// Odd primes below 2^11; the extra reach beyond 2^8 costs nothing and kills
// most candidates before Miller-Rabin.
const std::vector<uint32_t>& small_primes() {
    static const std::vector<uint32_t> primes = [] {
        std::vector<uint32_t> out;
        std::vector<bool> sieve(2048, true);
        for (uint32_t i = 2; i < sieve.size(); ++i) {
            if (!sieve[i]) continue;
            if (i > 2) out.push_back(i);
            for (uint32_t j = i * i; j < sieve.size(); j += i) sieve[j] = false;
        }
        return out;
    }();
    return primes;
}

}  // namespace

BigInt modexp(const BigInt& base, const BigInt& exponent, const BigInt& modulus) {
    if (modulus < 2) throw std::invalid_argument("modexp: modulus must be >= 2");
    if (exponent < 0) throw std::invalid_argument("modexp: negative exponent");
    BigInt b = base % modulus;
    if (b < 0) b += modulus;
    BigInt result = 1;
    for (int i = static_cast<int>(bit_length(exponent)) - 1; i >= 0; --i) {
        result = result * result % modulus;
        if (bit_test(exponent, static_cast<unsigned>(i))) result = result * b % modulus;
    }
    return result;
}

unsigned bit_length(const BigInt& n) {
    if (n <= 0) return 0;
    return boost::multiprecision::msb(n) + 1;
}

bool passes_trial_division(const BigInt& n) {
    if (n < 2) return false;
    if (n == 2) return true;
    if ((n & 1) == 0) return false;
    for (uint32_t p : small_primes()) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    return true;
}

bool miller_rabin(const BigInt& n, int witnesses, Rng& rng) {
    if (witnesses < 1) throw std::invalid_argument("miller_rabin: need >= 1 witness");
    if (n < 2) return false;
    if (n == 2 || n == 3) return true;
    if ((n & 1) == 0) return false;

    BigInt d = n - 1;
    unsigned r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    for (int w = 0; w < witnesses; ++w) {
        BigInt a = uniform_bigint(2, n - 2, rng);
        BigInt x = modexp(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (unsigned i = 1; i < r; ++i) {
            x = x * x % n;
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

bool is_safe_prime(const BigInt& p, int witnesses, Rng& rng) {
    if (p < 5) return false;
    BigInt q = (p - 1) >> 1;
    return passes_trial_division(p) && passes_trial_division(q) &&
           miller_rabin(q, witnesses, rng) && miller_rabin(p, witnesses, rng);
}

BigInt generate_safe_prime(unsigned bits, int witnesses, Rng& rng) {
    if (bits < 16) throw std::invalid_argument("generate_safe_prime: need >= 16 bits");
    for (int attempt = 0; attempt < kPrimeGenRetryCap; ++attempt) {
        BitString raw = rng.next_bits(bits);
        BigInt p = bits_to_bigint(raw);
        bit_set(p, bits - 1);  // exact bit length
        p |= 3;                // odd, and p = 3 mod 4 as every safe prime > 5 is
        if (bit_length(p) != bits) continue;
        if (is_safe_prime(p, witnesses, rng)) return p;
    }
    throw std::runtime_error("generate_safe_prime: retry cap exhausted");
}

bool generator_ok(const BigInt& g, const BigInt& p) {
    if (g < 2 || g > p - 2) return false;
    BigInt q = (p - 1) >> 1;
    return modexp(g, 2, p) != 1 && modexp(g, q, p) != 1;
}

BigInt select_generator(const BigInt& p, Rng& rng) {
    for (int attempt = 0; attempt < kPrimeGenRetryCap; ++attempt) {
        BigInt g = uniform_bigint(2, p - 2, rng);
        if (generator_ok(g, p)) return g;
    }
    throw std::runtime_error("select_generator: retry cap exhausted");
}

BigInt uniform_bigint(const BigInt& lo, const BigInt& hi, Rng& rng) {
    if (lo > hi) throw std::invalid_argument("uniform_bigint: empty range");
    BigInt span = hi - lo;
    unsigned width = bit_length(span);
    if (width == 0) return lo;
    for (;;) {
        BigInt v = bits_to_bigint(rng.next_bits(width));
        if (v <= span) return lo + v;
    }
}

BitString bigint_to_bits(const BigInt& value, size_t width) {
    if (value < 0) throw std::invalid_argument("bigint_to_bits: negative value");
    if (bit_length(value) > width)
        throw std::invalid_argument("bigint_to_bits: value does not fit in width");
    BitString out = BitString::zeros(width);
    for (size_t i = 0; i < width; ++i)
        if (bit_test(value, static_cast<unsigned>(width - 1 - i))) out.set_bit(i, 1);
    return out;
}

BigInt bits_to_bigint(const BitString& bits) {
    BigInt v = 0;
    for (size_t i = 0; i < bits.size(); ++i) {
        v <<= 1;
        if (bits.bit(i)) v |= 1;
    }
    return v;
}

}  // namespace hkd
