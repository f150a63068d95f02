#pragma once

#include <cstdint>

#include <boost/multiprecision/cpp_int.hpp>

#include "hkd/bitstring.hpp"
#include "hkd/rng.hpp"

namespace hkd {

using BigInt = boost::multiprecision::cpp_int;

/// base^exponent mod modulus by left-to-right square-and-multiply; work is
/// proportional to the exponent's bit length. Modulus must be >= 2.
BigInt modexp(const BigInt& base, const BigInt& exponent, const BigInt& modulus);

/// Miller-Rabin with `witnesses` independent random bases. Composites escape
/// each witness with probability < 1/4.
bool miller_rabin(const BigInt& n, int witnesses, Rng& rng);

/// Trial division by the cached small primes (< 2^8 at minimum); returns
/// false only on a found factor, so survivors still need Miller-Rabin.
bool passes_trial_division(const BigInt& n);

bool is_safe_prime(const BigInt& p, int witnesses, Rng& rng);

/// Random safe prime p = 2q+1 of exactly `bits` bits (top bit set), q prime.
/// Candidates are drawn fresh each attempt; a cap of 10^5 candidates guards
/// non-termination. Requires bits >= 16.
BigInt generate_safe_prime(unsigned bits, int witnesses, Rng& rng);

/// True iff g in [2, p-2] generates the full group mod the safe prime p:
/// g^2 != 1 and g^q != 1 with q = (p-1)/2, so ord(g) = p-1.
bool generator_ok(const BigInt& g, const BigInt& p);

/// Random full-group generator for the safe prime p.
BigInt select_generator(const BigInt& p, Rng& rng);

/// Uniform in [lo, hi] by rejection sampling on the covering bit width.
BigInt uniform_bigint(const BigInt& lo, const BigInt& hi, Rng& rng);

unsigned bit_length(const BigInt& n);

/// Fixed-width big-endian bit encoding; value must fit in `width` bits.
BitString bigint_to_bits(const BigInt& value, size_t width);
BigInt bits_to_bigint(const BitString& bits);

}  // namespace hkd
