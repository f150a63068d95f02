#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "hkd/bigint.hpp"
#include "hkd/bitstring.hpp"
#include "hkd/kljn.hpp"
#include "hkd/wire.hpp"

namespace hkd {

/// Smallest non-negative a with g^a = target (mod p), by scanning successive
/// powers. Toy moduli only: refuses p >= 2^20. Throws if no exponent works.
uint64_t brute_force_dlog(const BigInt& g, const BigInt& target, const BigInt& p);

/// What a wire observer sees of one unencrypted exchange.
struct ClearRound {
    BigInt p, g, A, B;
};

struct ToyExchange {
    ClearRound wire;
    BigInt alice_secret;
    BigInt bob_secret;
    BigInt shared;
};

/// A full cleartext exchange at toy size, for attack demonstrations.
ToyExchange make_toy_exchange(unsigned prime_bits, int prime_gen_rounds, uint64_t seed);

/// Recovers the shared secret from a cleartext round via brute-force dlog.
BigInt crack_plain_round(const ClearRound& round);

struct AttackReport {
    std::string name;
    std::string inputs;
    bool success = false;
    std::vector<std::pair<std::string, double>> statistics;
    std::vector<std::string> notes;

    double stat(const std::string& key) const;  // throws if the key is absent
    bool has_stat(const std::string& key) const;
};

void write_attack_report(std::ostream& os, const AttackReport& report);

/// Threshold rule on the period statistics, scored against Alice's key.
AttackReport attack_kljn_guess(const RawExchangeResult& exchange, const KljnConfig& config);

/// Everything Eve can extract from an expansion tap when she knows the field
/// widths. Each round attempt is first tried as a cleartext exchange
/// (parse, primality-check, crack when the modulus is toy-sized); the
/// fallback pairs every true key bit with the ciphertext bit and byte that
/// sit where the secret's low-order segment would be.
struct EveView {
    size_t attempts = 0;             // PRIME_G..PUBVAL round attempts on the wire
    size_t cleartext_plausible = 0;  // attempts whose decodes look like a real round
    size_t cracked = 0;              // segments recovered via a cleartext interpretation
    size_t cracked_matching = 0;     // ... that also match the true key
    BitString guesses;               // aligned ciphertext bits, one per true key bit
    std::vector<uint8_t> aligned_bytes;  // observation byte per true key bit
    std::vector<uint8_t> truth_bits;
    std::vector<uint8_t> ciphertext_bytes;  // full-entropy ciphertext byte stream
};

EveView extract_eve_view(const EveTap& tap, unsigned prime_bits, unsigned k_bits,
                         const BitString& true_key);

/// Cleartext-transcript attack: cracks every round that parses as a
/// cleartext exchange and scores the recovered segments against the parties'
/// key. On an OTP-encrypted tap the precondition fails and the report says
/// so instead of succeeding.
AttackReport attack_plain_dhm(const EveTap& tap, unsigned prime_bits, unsigned k_bits,
                              const BitString& true_key);

/// Attack on an OTP-encrypted expansion: cleartext interpretation attempts,
/// then aligned-ciphertext statistics (guess accuracy, byte uniformity, bit
/// balance, bias-corrected mutual information). `trials` sizes the MI bias
/// calibration; `seed` drives it.
AttackReport attack_encrypted_dhm(const EveTap& tap, unsigned prime_bits, unsigned k_bits,
                                  const BitString& true_key, int trials, uint64_t seed);

struct ReuseLeak {
    BitString c1, c2, leak;  // leak = c1 xor c2 = m1 xor m2; the pad cancels
};

/// Encrypts both messages under the same pad (the misuse) and returns the
/// resulting ciphertexts with their XOR.
ReuseLeak reuse_encrypt(const BitString& m1, const BitString& m2, const BitString& pad);

/// Known-plaintext demonstration: the leak plus one plaintext exposes the
/// other bit-for-bit.
AttackReport reuse_leak_demo(const BitString& m1, const BitString& m2, const BitString& pad);

}  // namespace hkd
