#include "hkd/dhm.hpp"

#include <exception>
#include <thread>

#include "hkd/otp.hpp"

namespace hkd {

namespace {

std::vector<uint8_t> pack_bits(const BitString& bits) { return bits.to_packed(); }

BitString unpack_bits(const std::vector<uint8_t>& bytes, size_t nbits) {
    if (bytes.size() != (nbits + 7) / 8)
        throw ProtocolError("frame payload has wrong length for declared field width");
    return BitString::from_packed(bytes, nbits);
}

void send_abort(FrameChannel& channel, uint8_t reason) {
    channel.send(WireFrame{FrameType::Abort, {reason}});
}

}  // namespace

void DhmParams::validate() const {
    if (prime_bits < 16) throw std::invalid_argument("dhm: prime_bits must be >= 16");
    if (k_bits == 0 || k_bits > prime_bits - 1)
        throw std::invalid_argument("dhm: k_bits must be in [1, prime_bits-1]");
    if (rounds < 1) throw std::invalid_argument("dhm: rounds must be >= 1");
    if (prime_gen_rounds < 1) throw std::invalid_argument("dhm: prime_gen_rounds must be >= 1");
}

uint64_t per_round_pool_cost(const DhmParams& params) {
    return 4ull * params.prime_bits;  // p, g, A, B at fixed width
}

bool segment_accepted(const BigInt& s, const BigInt& p, unsigned k_bits) {
    if (s < 1 || s >= p) throw std::invalid_argument("segment_accepted: s outside [1, p-1]");
    BigInt block = BigInt(1) << k_bits;
    BigInt limit = block * ((p - 1) / block);
    return s <= limit;
}

BitString derive_segment(const BigInt& s, const BigInt& p, unsigned k_bits) {
    if (!segment_accepted(s, p, k_bits))
        throw std::logic_error("derive_segment: called on a rejected shared secret");
    BitString out = BitString::zeros(k_bits);
    for (unsigned i = 0; i < k_bits; ++i)
        if (bit_test(s, k_bits - 1 - i)) out.set_bit(i, 1);
    return out;
}

std::optional<PartyRound> run_encrypted_round(KeyPool& pool, const DhmParams& params,
                                              FrameChannel& channel, Side side, Rng& rng) {
    params.validate();
    const unsigned w = params.prime_bits;
    const uint64_t cost = per_round_pool_cost(params);

    PartyRound round;
    for (;;) {
        // Budget mode: affordability is checked before any bit is consumed,
        // so an exhausted round never sends partial data.
        if (pool.mode() == PoolMode::Budget && pool.remaining() < cost) {
            send_abort(channel, kAbortExhausted);
            throw PoolExhausted(cost, pool.remaining());
        }

        BigInt p, g;
        try {
            if (side == Side::Alice) {
                p = generate_safe_prime(w, params.prime_gen_rounds, rng);
                g = select_generator(p, rng);
                BitString clear = bigint_to_bits(p, w);
                clear.append(bigint_to_bits(g, w));
                auto [ct, receipt] = otp_encrypt_with_pool(clear, pool);
                channel.send(WireFrame{FrameType::PrimeG, pack_bits(ct)});
            } else {
                WireFrame frame = channel.recv();
                if (frame.type == FrameType::Abort) return std::nullopt;
                if (frame.type != FrameType::PrimeG)
                    throw ProtocolError("expected PRIME_G, got " +
                                        std::string(frame_type_name(frame.type)));
                auto [clear, receipt] =
                    otp_decrypt_with_pool(unpack_bits(frame.payload, 2 * w), pool);
                p = bits_to_bigint(clear.slice(0, w));
                g = bits_to_bigint(clear.slice(w, w));
                if (bit_length(p) != w || (p & 1) == 0)
                    throw ProtocolError("received prime fails sanity checks");
                if (g < 2 || g > p - 2) throw ProtocolError("received generator out of range");
            }

            round.p = p;
            round.g = g;
            round.own_secret = uniform_bigint(2, p - 2, rng);
            round.own_public = modexp(g, round.own_secret, p);

            if (side == Side::Alice) {
                auto [ct, receipt] =
                    otp_encrypt_with_pool(bigint_to_bits(round.own_public, w), pool);
                channel.send(WireFrame{FrameType::PubVal, pack_bits(ct)});
                WireFrame frame = channel.recv();
                if (frame.type == FrameType::Abort) return std::nullopt;
                if (frame.type != FrameType::PubVal)
                    throw ProtocolError("expected PUBVAL, got " +
                                        std::string(frame_type_name(frame.type)));
                auto [clear, r2] = otp_decrypt_with_pool(unpack_bits(frame.payload, w), pool);
                round.peer_public = bits_to_bigint(clear);
            } else {
                WireFrame frame = channel.recv();
                if (frame.type == FrameType::Abort) return std::nullopt;
                if (frame.type != FrameType::PubVal)
                    throw ProtocolError("expected PUBVAL, got " +
                                        std::string(frame_type_name(frame.type)));
                auto [clear, r2] = otp_decrypt_with_pool(unpack_bits(frame.payload, w), pool);
                round.peer_public = bits_to_bigint(clear);
                auto [ct, receipt] =
                    otp_encrypt_with_pool(bigint_to_bits(round.own_public, w), pool);
                channel.send(WireFrame{FrameType::PubVal, pack_bits(ct)});
            }
        } catch (const PoolExhausted&) {
            // Replenish-mode draws can still fail if the source dries up.
            send_abort(channel, kAbortExhausted);
            throw;
        }

        if (round.peer_public < 1 || round.peer_public >= p)
            throw ProtocolError("peer public value out of range");
        round.shared_secret = modexp(round.peer_public, round.own_secret, p);

        // Both sides hold the same s and apply the same rule, so a rejected
        // round reruns in lockstep with fresh numbers and fresh pad bits.
        if (segment_accepted(round.shared_secret, p, params.k_bits)) break;
        ++round.rejected_attempts;
    }

    round.segment = derive_segment(round.shared_secret, round.p, params.k_bits);
    return round;
}

ExpandResult expand_key(KeyPool& pool, const DhmParams& params, FrameChannel& channel,
                        Side side, Rng& rng) {
    params.validate();
    ExpandResult result;
    uint64_t consumed_before = pool.total_consumed();
    for (size_t r = 0; r < params.rounds; ++r) {
        std::optional<PartyRound> round;
        try {
            round = run_encrypted_round(pool, params, channel, side, rng);
        } catch (const PoolExhausted&) {
            result.partial = true;
            result.cause = PartialCause::PoolExhausted;
            break;
        }
        if (!round) {  // peer aborted
            result.partial = true;
            result.cause = PartialCause::PeerAbort;
            break;
        }
        result.rounds_rejected += round->rejected_attempts;
        result.key.material.append(round->segment);
        result.key.segments.push_back(round->segment);
        result.rounds.push_back(std::move(*round));
        ++result.rounds_completed;
    }
    result.pool_bits_consumed = pool.total_consumed() - consumed_before;
    return result;
}

ExpandPairResult expand_key_lockstep(KeyPool& alice_pool, KeyPool& bob_pool,
                                     const DhmParams& params, uint64_t alice_seed,
                                     uint64_t bob_seed) {
    InProcessDuplex duplex;
    ExpandPairResult out;
    std::exception_ptr alice_error, bob_error;

    std::thread alice_thread([&] {
        try {
            Rng rng(alice_seed);
            out.alice = expand_key(alice_pool, params, duplex.alice(), Side::Alice, rng);
        } catch (...) {
            alice_error = std::current_exception();
        }
    });
    std::thread bob_thread([&] {
        try {
            Rng rng(bob_seed);
            out.bob = expand_key(bob_pool, params, duplex.bob(), Side::Bob, rng);
        } catch (...) {
            bob_error = std::current_exception();
        }
    });
    alice_thread.join();
    bob_thread.join();
    if (alice_error) std::rethrow_exception(alice_error);
    if (bob_error) std::rethrow_exception(bob_error);
    out.tap = duplex.tap();
    return out;
}

}  // namespace hkd
