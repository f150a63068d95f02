#include "hkd/attacks.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "hkd/dhm.hpp"
#include "hkd/otp.hpp"
#include "hkd/rng.hpp"
#include "hkd/stats.hpp"

namespace hkd {

namespace {

constexpr uint64_t kDlogLimit = 1ull << 20;

std::string hex_of(const std::vector<uint8_t>& bytes) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (uint8_t b : bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xf]);
    }
    return out;
}

}  // namespace

uint64_t brute_force_dlog(const BigInt& g, const BigInt& target, const BigInt& p) {
    if (p < 2 || p >= kDlogLimit)
        throw std::invalid_argument("brute_force_dlog: modulus out of toy range");
    const uint64_t pv = p.convert_to<uint64_t>();
    const uint64_t gv = (g % p).convert_to<uint64_t>();
    const uint64_t tv = (target % p).convert_to<uint64_t>();
    uint64_t power = 1 % pv;
    for (uint64_t a = 0; a + 1 < pv; ++a) {  // element orders divide p-1
        if (power == tv) return a;
        power = power * gv % pv;
    }
    throw std::runtime_error("brute_force_dlog: no exponent maps g to target");
}

ToyExchange make_toy_exchange(unsigned prime_bits, int prime_gen_rounds, uint64_t seed) {
    Rng rng(seed);
    ToyExchange toy;
    toy.wire.p = generate_safe_prime(prime_bits, prime_gen_rounds, rng);
    toy.wire.g = select_generator(toy.wire.p, rng);
    toy.alice_secret = uniform_bigint(2, toy.wire.p - 2, rng);
    toy.bob_secret = uniform_bigint(2, toy.wire.p - 2, rng);
    toy.wire.A = modexp(toy.wire.g, toy.alice_secret, toy.wire.p);
    toy.wire.B = modexp(toy.wire.g, toy.bob_secret, toy.wire.p);
    toy.shared = modexp(toy.wire.B, toy.alice_secret, toy.wire.p);
    return toy;
}

BigInt crack_plain_round(const ClearRound& round) {
    uint64_t a = brute_force_dlog(round.g, round.A, round.p);
    return modexp(round.B, BigInt(a), round.p);
}

double AttackReport::stat(const std::string& key) const {
    for (const auto& [k, v] : statistics)
        if (k == key) return v;
    throw std::out_of_range("attack report has no statistic '" + key + "'");
}

bool AttackReport::has_stat(const std::string& key) const {
    for (const auto& [k, v] : statistics)
        if (k == key) return true;
    return false;
}

void write_attack_report(std::ostream& os, const AttackReport& report) {
    os << "attack " << report.name << "\n";
    os << "inputs " << report.inputs << "\n";
    os << "success " << (report.success ? 1 : 0) << "\n";
    char buf[64];
    for (const auto& [key, value] : report.statistics) {
        std::snprintf(buf, sizeof buf, "%.9e", value);
        os << key << ' ' << buf << "\n";
    }
    for (const auto& note : report.notes) os << "note " << note << "\n";
}

AttackReport attack_kljn_guess(const RawExchangeResult& exchange, const KljnConfig& config) {
    AttackReport report;
    report.name = "kljn-guess";
    report.inputs = "periods=" + std::to_string(config.periods) +
                    " samples=" + std::to_string(config.samples_per_period);
    EveGuessResult guess = eve_best_guess(exchange.eve_observations, exchange.periods, config);
    double n = static_cast<double>(guess.secure_bits);
    // 3-sigma binomial band around a fair coin.
    double bound = n > 0 ? 0.5 + 3.0 * std::sqrt(0.25 / n) : 1.0;
    report.success = guess.accuracy > bound;
    report.statistics.emplace_back("secure_bits", n);
    report.statistics.emplace_back("accuracy", guess.accuracy);
    report.statistics.emplace_back("accuracy_bound", bound);
    if (!report.success)
        report.notes.push_back("threshold rule does not beat a fair coin on mixed states");
    return report;
}

EveView extract_eve_view(const EveTap& tap, unsigned prime_bits, unsigned k_bits,
                         const BitString& true_key) {
    if (k_bits == 0 || k_bits >= prime_bits)
        throw std::invalid_argument("extract_eve_view: bad field widths");
    const unsigned w = prime_bits;

    struct Attempt {
        std::vector<uint8_t> prime_g, pub_a, pub_b;
        bool complete() const { return !prime_g.empty() && !pub_a.empty() && !pub_b.empty(); }
    };
    std::vector<Attempt> attempts;
    Attempt current;
    EveView view;

    auto append_full_bytes = [&](const std::vector<uint8_t>& payload, size_t field_bits) {
        size_t full = std::min(field_bits / 8, payload.size());
        view.ciphertext_bytes.insert(view.ciphertext_bytes.end(), payload.begin(),
                                     payload.begin() + static_cast<long>(full));
    };

    for (const TapEntry& entry : tap.entries) {
        const WireFrame& f = entry.frame;
        switch (f.type) {
            case FrameType::PrimeG:
                if (current.complete()) attempts.push_back(std::move(current));
                current = Attempt{};
                current.prime_g = f.payload;
                append_full_bytes(f.payload, 2ull * w);
                break;
            case FrameType::PubVal:
                if (entry.direction == Direction::AliceToBob) current.pub_a = f.payload;
                else current.pub_b = f.payload;
                append_full_bytes(f.payload, w);
                break;
            case FrameType::Data:
                if (f.payload.size() > 8)
                    view.ciphertext_bytes.insert(view.ciphertext_bytes.end(),
                                                 f.payload.begin() + 8, f.payload.end());
                break;
            default:
                break;  // HELLO is cleartext, ABORT carries no key material
        }
    }
    if (current.complete()) attempts.push_back(std::move(current));
    view.attempts = attempts.size();

    // Cleartext interpretation. Accepted secrets map 1:1, in order, onto the
    // parties' segments; rejected attempts produced no segment and are
    // skipped by both sides' rerun rule.
    Rng mr_rng(0x9d5ull);
    const size_t segments = true_key.size() / k_bits;
    size_t segment_idx = 0;
    for (const Attempt& at : attempts) {
        if (at.prime_g.size() * 8 < 2ull * w) continue;
        BitString pg = BitString::from_packed(at.prime_g, 2ull * w);
        BigInt p = bits_to_bigint(pg.slice(0, w));
        BigInt g = bits_to_bigint(pg.slice(w, w));
        if (bit_length(p) != w || p < 5 || (p & 1) == 0) continue;
        if (g < 2 || g > p - 2) continue;
        if (!miller_rabin(p, 12, mr_rng)) continue;
        ++view.cleartext_plausible;
        if (p >= kDlogLimit) continue;  // looks like a round but is uncrackable
        BigInt A = bits_to_bigint(BitString::from_packed(at.pub_a, w));
        BigInt B = bits_to_bigint(BitString::from_packed(at.pub_b, w));
        if (A < 2 || A > p - 2 || B < 2 || B > p - 2) continue;
        BigInt s;
        try {
            s = modexp(B, BigInt(brute_force_dlog(g, A, p)), p);
        } catch (const std::runtime_error&) {
            continue;
        }
        if (!segment_accepted(s, p, k_bits)) continue;  // a rerun attempt, no segment
        ++view.cracked;
        BitString segment = derive_segment(s, p, k_bits);
        if (segment_idx < segments && segment == true_key.slice(segment_idx * k_bits, k_bits))
            ++view.cracked_matching;
        ++segment_idx;
    }

    // Aligned-bit fallback: the low k_bits of the w-bit PUBVAL field from Bob
    // are where the secret's segment would sit.
    const size_t usable = std::min(attempts.size(), segments);
    for (size_t r = 0; r < usable; ++r) {
        if (attempts[r].pub_b.size() * 8 < w) continue;
        BitString field = BitString::from_packed(attempts[r].pub_b, w);
        for (unsigned q = 0; q < k_bits; ++q) {
            size_t field_bit = w - k_bits + q;
            view.guesses.append_bit(field.bit(field_bit));
            view.aligned_bytes.push_back(attempts[r].pub_b[field_bit / 8]);
            view.truth_bits.push_back(true_key.bit(r * k_bits + q));
        }
    }
    return view;
}

AttackReport attack_plain_dhm(const EveTap& tap, unsigned prime_bits, unsigned k_bits,
                              const BitString& true_key) {
    AttackReport report;
    report.name = "plain-dhm";
    report.inputs = "prime_bits=" + std::to_string(prime_bits) +
                    " k_bits=" + std::to_string(k_bits) +
                    " key_bits=" + std::to_string(true_key.size());
    EveView view = extract_eve_view(tap, prime_bits, k_bits, true_key);
    const size_t segments = k_bits ? true_key.size() / k_bits : 0;
    report.statistics.emplace_back("attempts", static_cast<double>(view.attempts));
    report.statistics.emplace_back("cleartext_plausible",
                                   static_cast<double>(view.cleartext_plausible));
    report.statistics.emplace_back("segments", static_cast<double>(segments));
    report.statistics.emplace_back("cracked", static_cast<double>(view.cracked));
    report.statistics.emplace_back("cracked_matching",
                                   static_cast<double>(view.cracked_matching));
    report.statistics.emplace_back(
        "accuracy",
        segments ? static_cast<double>(view.cracked_matching) / static_cast<double>(segments)
                 : 0.0);
    report.success = segments > 0 && view.cracked_matching == segments;
    if (view.cleartext_plausible == 0)
        report.notes.push_back("no frame parses as a cleartext round; attack inapplicable");
    else if (!report.success)
        report.notes.push_back("some rounds resisted the cleartext interpretation");
    return report;
}

AttackReport attack_encrypted_dhm(const EveTap& tap, unsigned prime_bits, unsigned k_bits,
                                  const BitString& true_key, int trials, uint64_t seed) {
    AttackReport report;
    report.name = "encrypted-dhm";
    report.inputs = "prime_bits=" + std::to_string(prime_bits) +
                    " k_bits=" + std::to_string(k_bits) +
                    " key_bits=" + std::to_string(true_key.size());
    EveView view = extract_eve_view(tap, prime_bits, k_bits, true_key);
    report.success = view.cracked_matching > 0;

    size_t n = view.truth_bits.size();
    size_t matches = 0;
    for (size_t i = 0; i < n; ++i)
        if (view.guesses.bit(i) == view.truth_bits[i]) ++matches;
    double accuracy = n ? static_cast<double>(matches) / static_cast<double>(n) : 0.0;

    report.statistics.emplace_back("attempts", static_cast<double>(view.attempts));
    report.statistics.emplace_back("cleartext_plausible",
                                   static_cast<double>(view.cleartext_plausible));
    report.statistics.emplace_back("cracked", static_cast<double>(view.cracked));
    report.statistics.emplace_back("cracked_matching",
                                   static_cast<double>(view.cracked_matching));
    report.statistics.emplace_back("guess_bits", static_cast<double>(n));
    report.statistics.emplace_back("accuracy", accuracy);
    report.statistics.emplace_back("ciphertext_bytes",
                                   static_cast<double>(view.ciphertext_bytes.size()));

    if (view.ciphertext_bytes.size() >= 1280) {
        ChiSquareResult chi = chi_square_uniformity(view.ciphertext_bytes);
        report.statistics.emplace_back("chi_square_stat", chi.statistic);
        report.statistics.emplace_back("chi_square_p", chi.p_value);
        uint64_t ones = 0;
        for (uint8_t b : view.ciphertext_bytes) ones += std::popcount(static_cast<unsigned>(b));
        uint64_t total = view.ciphertext_bytes.size() * 8;
        ChiSquareResult balance = chi_square_counts({total - ones, ones});
        report.statistics.emplace_back("bit_balance_p", balance.p_value);
    } else {
        report.notes.push_back("ciphertext sample too small for a uniformity test");
    }
    if (n >= 1000 && trials > 0) {
        report.statistics.emplace_back(
            "mi_plugin", mutual_information_plugin(view.aligned_bytes, view.truth_bits));
        report.statistics.emplace_back(
            "mi_corrected",
            mutual_information_corrected(view.aligned_bytes, view.truth_bits, trials, seed));
    } else {
        report.notes.push_back("aligned sample too small for an MI estimate");
    }
    if (!report.success)
        report.notes.push_back("no round admitted a cleartext interpretation that cracks");
    return report;
}

ReuseLeak reuse_encrypt(const BitString& m1, const BitString& m2, const BitString& pad) {
    if (m1.size() != m2.size())
        throw std::invalid_argument("reuse_encrypt: messages must be the same length");
    if (m1.size() == 0) throw std::invalid_argument("reuse_encrypt: empty messages");
    if (pad.size() < m1.size())
        throw std::invalid_argument("reuse_encrypt: pad shorter than the messages");
    BitString slice = pad.slice(0, m1.size());
    ReuseLeak leak;
    leak.c1 = otp_apply(m1, slice);
    leak.c2 = otp_apply(m2, slice);  // the misuse: same pad twice
    leak.leak = otp_apply(leak.c1, leak.c2);
    return leak;
}

AttackReport reuse_leak_demo(const BitString& m1, const BitString& m2, const BitString& pad) {
    ReuseLeak leak = reuse_encrypt(m1, m2, pad);
    BitString expected = otp_apply(m1, m2);
    BitString recovered = otp_apply(leak.leak, m1);  // known-plaintext step

    AttackReport report;
    report.name = "reuse-demo";
    report.inputs = "message_bits=" + std::to_string(m1.size());
    report.success = leak.leak == expected && recovered == m2;
    report.statistics.emplace_back("message_bits", static_cast<double>(m1.size()));
    report.statistics.emplace_back("leak_is_plain_xor", leak.leak == expected ? 1.0 : 0.0);
    report.statistics.emplace_back("second_message_recovered", recovered == m2 ? 1.0 : 0.0);
    report.notes.push_back("c1 xor c2 = " + hex_of(leak.leak.to_packed()));
    return report;
}

}  // namespace hkd
