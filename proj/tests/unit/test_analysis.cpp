#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <sstream>
#include <vector>

#include "hkd/attacks.hpp"
#include "hkd/dhm.hpp"
#include "hkd/otp.hpp"
#include "hkd/rng.hpp"
#include "hkd/stats.hpp"
#include "hkd/throughput.hpp"

using namespace hkd;

TEST_CASE("stats: chi-square survival function against closed forms") {
    // df=2: sf(x) = exp(-x/2); df=4: sf(x) = exp(-x/2)(1 + x/2).
    for (double x : {0.5, 1.0, 2.0, 5.0, 10.0}) {
        CHECK(chi_square_sf(x, 2) == doctest::Approx(std::exp(-x / 2)).epsilon(1e-9));
        CHECK(chi_square_sf(x, 4) ==
              doctest::Approx(std::exp(-x / 2) * (1 + x / 2)).epsilon(1e-9));
    }
    CHECK(chi_square_sf(0.0, 5) == doctest::Approx(1.0));
    // Classic table entry: P[chi2_1 > 3.841] ~ 0.05.
    CHECK(chi_square_sf(3.841, 1) == doctest::Approx(0.05).epsilon(0.01));
    // Monotone decreasing in x (near the df, where the tail actually moves).
    CHECK(chi_square_sf(240, 255) > chi_square_sf(270, 255));
    CHECK(chi_square_sf(270, 255) > chi_square_sf(320, 255));
}

TEST_CASE("stats: chi-square uniformity basics") {
    // Exact-count sample: every byte value the same number of times.
    std::vector<uint8_t> exact;
    for (int rep = 0; rep < 6; ++rep)
        for (int v = 0; v < 256; ++v) exact.push_back(uint8_t(v));
    auto r = chi_square_uniformity(exact);
    CHECK(r.statistic == doctest::Approx(0.0));
    CHECK(r.p_value == doctest::Approx(1.0));
    CHECK(r.df == 255);

    // Constant sample: astronomically non-uniform.
    std::vector<uint8_t> constant(2000, 0x41);
    auto c = chi_square_uniformity(constant);
    CHECK(c.p_value < 1e-12);

    // Too small a sample is a usage error, not a weak answer.
    CHECK_THROWS(chi_square_uniformity(std::vector<uint8_t>(100, 0)));

    std::vector<uint64_t> counts = {300, 300, 300, 300};
    auto e = chi_square_counts(counts);
    CHECK(e.statistic == doctest::Approx(0.0));
    CHECK(e.df == 3);
}

TEST_CASE("stats: chi-square p-values are calibrated on uniform input") {
    // 100 seeded uniform samples: the p-value must land in (0.01, 0.99) for
    // at least 98 of them, i.e. the test neither over- nor under-rejects.
    int in_band = 0;
    for (uint64_t seed = 1; seed <= 100; ++seed) {
        Rng rng(substream_seed(0xca1, seed));
        std::vector<uint8_t> bytes(100000);
        for (auto& b : bytes) b = uint8_t(rng.next_below(256));
        double p = chi_square_uniformity(bytes).p_value;
        if (p > 0.01 && p < 0.99) ++in_band;
    }
    CHECK(in_band >= 98);
}

TEST_CASE("stats: mutual information estimators") {
    Rng rng(0x31);
    const size_t n = 20000;

    // Fully dependent: the bit is a function of the byte -> MI = H(bit) ~ 1.
    std::vector<uint8_t> bytes(n);
    std::vector<uint8_t> bits(n);
    for (size_t i = 0; i < n; ++i) {
        bytes[i] = uint8_t(rng.next_below(256));
        bits[i] = bytes[i] & 1;
    }
    CHECK(mutual_information_plugin(bytes, bits) == doctest::Approx(1.0).epsilon(0.02));

    // Independent: plugin shows only its positive bias; corrected ~ 0.
    std::vector<uint8_t> ind_bits(n);
    for (size_t i = 0; i < n; ++i) ind_bits[i] = rng.next_bit();
    double plugin = mutual_information_plugin(bytes, ind_bits);
    CHECK(plugin > 0.0);
    CHECK(plugin < 0.02);
    double corrected = mutual_information_corrected(bytes, ind_bits, 8, 0x77);
    CHECK(std::abs(corrected) < 0.005);

    // Partial dependence: bit = LSB flipped with prob q -> MI = 1 - H2(q).
    const double q = 0.11;
    std::vector<uint8_t> noisy(n);
    for (size_t i = 0; i < n; ++i)
        noisy[i] = (bytes[i] & 1) ^ (rng.next_double() < q ? 1 : 0);
    double h2 = -q * std::log2(q) - (1 - q) * std::log2(1 - q);
    double expect = 1.0 - h2;
    CHECK(mutual_information_corrected(bytes, noisy, 8, 0x78) ==
          doctest::Approx(expect).epsilon(0.05));
}

TEST_CASE("attacks: brute-force dlog worked examples") {
    // g=5, p=23: 5^6 = 8, 5^1 = 5, 5^0 = 1.
    CHECK(brute_force_dlog(5, 8, 23) == 6);
    CHECK(brute_force_dlog(5, 5, 23) == 1);
    CHECK(brute_force_dlog(5, 1, 23) == 0);
    CHECK(brute_force_dlog(5, modexp(5, 21, 23), 23) == 21);
    // 5 generates all of (Z/47)*? 47 safe, q=23: 5^2=25 != 1, 5^23 mod 47:
    // accept whatever generator_ok says and just verify invertibility.
    for (uint64_t a : {0ull, 1ull, 7ull, 22ull}) {
        BigInt t = modexp(2, a, 59);
        uint64_t rec = brute_force_dlog(2, t, 59);
        CHECK(modexp(2, rec, 59) == t);
        CHECK(rec <= a);  // smallest exponent wins
    }
    CHECK_THROWS(brute_force_dlog(5, 3, BigInt(1) << 21));  // refuses big moduli
    // No solution: 5 generates only half of (Z/13)*? use g=3 mod 13
    // (order 3: 3,9,1): target 2 is outside the subgroup.
    CHECK_THROWS(brute_force_dlog(3, 2, 13));
}

TEST_CASE("attacks: dlog oracle round-trip on toy groups") {
    // dlog(g, g^a mod p, p) == a for generators and a < ord(g).
    Rng rng(0xd109);
    for (uint64_t p : {23ull, 47ull, 59ull}) {
        BigInt g = select_generator(p, rng);
        for (int i = 0; i < 40; ++i) {
            uint64_t a = rng.next_below(p - 1);
            CHECK(brute_force_dlog(g, modexp(g, a, p), p) == a);
        }
    }
}

TEST_CASE("attacks: toy exchange cracks completely") {
    for (uint64_t seed : {1, 2, 3, 4, 5}) {
        ToyExchange toy = make_toy_exchange(16, 16, seed);
        CHECK(modexp(toy.wire.g, toy.alice_secret, toy.wire.p) == toy.wire.A);
        CHECK(modexp(toy.wire.g, toy.bob_secret, toy.wire.p) == toy.wire.B);
        CHECK(modexp(toy.wire.A, toy.bob_secret, toy.wire.p) == toy.shared);
        CHECK(crack_plain_round(toy.wire) == toy.shared);
    }
}

TEST_CASE("attacks: kljn statistic guesser is a coin flip") {
    KljnConfig cfg;
    cfg.periods = 4000;
    cfg.samples_per_period = 400;
    cfg.seed = 0xabcd;
    auto exchange = run_exchange(cfg);
    AttackReport rep = attack_kljn_guess(exchange, cfg);
    CHECK_FALSE(rep.success);
    double acc = rep.stat("accuracy");
    double n = rep.stat("secure_bits");
    CHECK(n > 1500);
    CHECK(std::abs(acc - 0.5) < 3.0 * 0.5 / std::sqrt(n) + 1e-12);
}

TEST_CASE("attacks: plain transcript cracks, encrypted does not") {
    DhmParams params;
    params.prime_bits = 16;
    params.k_bits = 8;
    params.rounds = 6;
    params.prime_gen_rounds = 16;
    const uint64_t cost = per_round_pool_cost(params);

    // Sabotaged pads: all-zero pool makes OTP the identity, so the "cipher"
    // frames carry the numbers in clear.
    BitString zeros = BitString::zeros(cost * 8);
    KeyPool ap(zeros, "test-injected");
    KeyPool bp(zeros, "test-injected");
    auto clear_run = expand_key_lockstep(ap, bp, params, 0xc0, 0xc1);
    REQUIRE_FALSE(clear_run.alice.partial);

    AttackReport plain =
        attack_plain_dhm(clear_run.tap, params.prime_bits, params.k_bits,
                         clear_run.alice.key.material);
    CHECK(plain.success);
    CHECK(plain.stat("cracked") == doctest::Approx(6));
    CHECK(plain.stat("accuracy") == doctest::Approx(1.0));

    // Same protocol, real pads: the identical attack finds nothing.
    Rng mrng(0x5151);
    BitString material = mrng.next_bits(cost * 8);
    KeyPool ap2(material, "test-injected");
    KeyPool bp2(material, "test-injected");
    auto enc_run = expand_key_lockstep(ap2, bp2, params, 0xc0, 0xc1);
    REQUIRE_FALSE(enc_run.alice.partial);

    AttackReport enc =
        attack_plain_dhm(enc_run.tap, params.prime_bits, params.k_bits,
                         enc_run.alice.key.material);
    CHECK_FALSE(enc.success);
    CHECK(enc.stat("cracked_matching") == doctest::Approx(0));
}

TEST_CASE("attacks: eve view aligns one observation per true key bit") {
    DhmParams params;
    params.prime_bits = 32;
    params.k_bits = 16;
    params.rounds = 5;
    params.prime_gen_rounds = 16;
    Rng mrng(0x99aa);
    BitString material = mrng.next_bits(per_round_pool_cost(params) * 6);
    KeyPool ap(material, "test-injected");
    KeyPool bp(material, "test-injected");
    auto run = expand_key_lockstep(ap, bp, params, 7, 8);
    REQUIRE_FALSE(run.alice.partial);

    EveView view = extract_eve_view(run.tap, params.prime_bits, params.k_bits,
                                    run.alice.key.material);
    size_t attempts = run.alice.rounds_completed + run.alice.rounds_rejected;
    CHECK(view.attempts == attempts);
    CHECK(view.guesses.size() == run.alice.key.material.size());
    CHECK(view.truth_bits.size() == run.alice.key.material.size());
    CHECK(view.aligned_bytes.size() == run.alice.key.material.size());
    CHECK(view.cracked == 0);  // 32-bit modulus is past the dlog limit
    CHECK(!view.ciphertext_bytes.empty());
}

TEST_CASE("attacks: encrypted-dhm report carries the security statistics") {
    DhmParams params;
    params.prime_bits = 16;
    params.k_bits = 8;
    params.rounds = 40;
    params.prime_gen_rounds = 12;
    Rng mrng(0x7f7f);
    BitString material = mrng.next_bits(per_round_pool_cost(params) * 50);
    KeyPool ap(material, "test-injected");
    KeyPool bp(material, "test-injected");
    auto run = expand_key_lockstep(ap, bp, params, 70, 80);
    REQUIRE_FALSE(run.alice.partial);

    AttackReport rep = attack_encrypted_dhm(run.tap, params.prime_bits, params.k_bits,
                                            run.alice.key.material, 4, 0x1234);
    CHECK_FALSE(rep.success);
    CHECK(rep.stat("attempts") == doctest::Approx(40).epsilon(0.2));
    CHECK(rep.has_stat("accuracy"));
    double acc = rep.stat("accuracy");
    // 320 aligned bits, fair coin: 5 sigma = 0.14.
    CHECK(std::abs(acc - 0.5) < 0.14);
    CHECK(rep.stat("cracked_matching") == doctest::Approx(0));

    std::stringstream ss;
    write_attack_report(ss, rep);
    std::string text = ss.str();
    CHECK(text.find("attack encrypted-dhm") != std::string::npos);
    CHECK(text.find("success 0") != std::string::npos);
    CHECK(text.find("accuracy") != std::string::npos);
}

TEST_CASE("attacks: pad reuse leaks the xor of the plaintexts") {
    BitString m1 = BitString::from_string("1100");
    BitString m2 = BitString::from_string("1010");
    Rng rng(0xfa);
    BitString pad = rng.next_bits(4);
    ReuseLeak leak = reuse_encrypt(m1, m2, pad);
    CHECK(leak.leak.to_string() == "0110");
    CHECK(leak.leak == otp_apply(m1, m2));
    CHECK(otp_apply(leak.c1, pad) == m1);
    CHECK(otp_apply(leak.c2, pad) == m2);

    // Identical messages leak the all-zero string — detectable equality.
    ReuseLeak same = reuse_encrypt(m1, m1, pad);
    CHECK(same.leak == BitString::zeros(4));

    // Known-plaintext recovery: 1000 random cases, exact every time.
    Rng cases(0xfb);
    for (int i = 0; i < 1000; ++i) {
        size_t n = 1 + cases.next_below(96);
        BitString a = cases.next_bits(n);
        BitString b = cases.next_bits(n);
        BitString p = cases.next_bits(n);
        ReuseLeak l = reuse_encrypt(a, b, p);
        CHECK(otp_apply(l.leak, a) == b);
        CHECK(otp_apply(l.leak, b) == a);
    }

    AttackReport rep = reuse_leak_demo(m1, m2, pad);
    CHECK(rep.success);  // the misuse attack genuinely works
    CHECK(rep.stat("message_bits") == doctest::Approx(4));
    CHECK(rep.stat("second_message_recovered") == doctest::Approx(1));
    CHECK(rep.stat("leak_is_plain_xor") == doctest::Approx(1));
}

TEST_CASE("throughput: worked example and identities") {
    // N=4096 physical bits expand to M=32768; physical 100 bit/s vs software
    // 10^6 bit/s: 327.68 s physical-only versus 40.96 s + 0.033 s hybrid.
    ThroughputInputs in;
    in.physical_bits = 4096;
    in.expanded_bits = 32768;
    in.pool_bits_consumed = 4096;
    in.physical_rate = 100.0;
    in.software_rate = 1e6;
    ThroughputReport rep = compute_throughput(in);
    CHECK(rep.physical_only_seconds == doctest::Approx(327.68));
    CHECK(rep.hybrid_physical_seconds == doctest::Approx(40.96));
    CHECK(rep.hybrid_software_seconds == doctest::Approx(0.032768));
    CHECK(rep.hybrid_total_seconds == doctest::Approx(40.992768));
    CHECK(rep.speedup == doctest::Approx(327.68 / 40.992768));
    CHECK(rep.expansion_ratio == doctest::Approx(8.0));
    CHECK(rep.pad_cost_ratio == doctest::Approx(4096.0 / 32768.0));

    CHECK_THROWS(compute_throughput(ThroughputInputs{}));  // zero rates

    std::stringstream ss;
    write_throughput_table(ss, in, rep);
    std::string text = ss.str();
    CHECK(text.find("speedup") != std::string::npos);
    CHECK(text.find("327.68") != std::string::npos);
}
