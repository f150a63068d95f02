#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hkd/bigint.hpp"
#include "hkd/bitstring.hpp"
#include "hkd/keypool.hpp"
#include "hkd/rng.hpp"
#include "hkd/wire.hpp"

namespace hkd {

class ProtocolError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Side : uint8_t { Alice, Bob };

// ABORT frame reason byte.
inline constexpr uint8_t kAbortExhausted = 0x01;
inline constexpr uint8_t kAbortInternal = 0x02;
inline constexpr uint8_t kAbortDesync = 0x03;

struct DhmParams {
    unsigned prime_bits = 256;
    unsigned k_bits = 128;      // segment bits per round
    size_t rounds = 1;          // total segments requested
    int prime_gen_rounds = 24;  // primality-test witnesses

    void validate() const;
};

/// Pad bits one side spends per round attempt: p and g (prime_bits each) plus
/// the two public values. Sends and receives consume the same shared-pool
/// interval, so both sides pay for all four fields.
uint64_t per_round_pool_cost(const DhmParams& params);

/// One side's view of a completed round. The peer's secret exponent never
/// exists here; it is generated, used, and dropped on the other side.
struct PartyRound {
    BigInt p;
    BigInt g;
    BigInt own_secret;
    BigInt own_public;
    BigInt peer_public;
    BigInt shared_secret;
    BitString segment;
    size_t rejected_attempts = 0;  // full reruns forced by segment rejection
};

/// Low-bit segment derivation with rejection so segments are exactly uniform:
/// a shared secret is accepted iff s <= 2^k * floor((p-1) / 2^k); each k-bit
/// pattern then has the same number of accepted preimages in [1, p-1].
bool segment_accepted(const BigInt& s, const BigInt& p, unsigned k_bits);

/// The k lowest-order bits of s. Caller must have checked segment_accepted;
/// both sides see the same s, so they reject and rerun in lockstep without
/// extra communication.
BitString derive_segment(const BigInt& s, const BigInt& p, unsigned k_bits);

/// Runs one OTP-encrypted round. Alice generates a fresh safe prime and
/// full-group generator, encrypts them with pool bits, and sends PRIME_G;
/// each side keeps its secret exponent local and sends its public value
/// OTP-encrypted. Nothing of the protocol crosses the wire in cleartext.
///
/// Returns nullopt if the peer sent ABORT. Throws PoolExhausted after
/// notifying the peer with an unencrypted ABORT frame carrying no round data;
/// in budget mode the cost is checked up front so no bits are consumed on
/// failure.
std::optional<PartyRound> run_encrypted_round(KeyPool& pool, const DhmParams& params,
                                              FrameChannel& channel, Side side, Rng& rng);

/// The expanded key: per-round segments concatenated in round order.
struct SoftKey {
    BitString material;
    std::vector<BitString> segments;
};

enum class PartialCause : uint8_t {
    None,
    PoolExhausted,  // this side ran out of pad
    PeerAbort,      // peer signalled abort (typically its own exhaustion)
};

struct ExpandResult {
    SoftKey key;
    bool partial = false;  // stopped early on pool exhaustion
    PartialCause cause = PartialCause::None;
    size_t rounds_completed = 0;
    size_t rounds_rejected = 0;  // rerun attempts across all rounds
    uint64_t pool_bits_consumed = 0;
    std::vector<PartyRound> rounds;
};

/// Runs params.rounds independent rounds (fresh prime, generator, and secrets
/// each) and concatenates the segments. Exhaustion mid-expansion yields a
/// partial result rather than an error.
ExpandResult expand_key(KeyPool& pool, const DhmParams& params, FrameChannel& channel,
                        Side side, Rng& rng);

struct ExpandPairResult {
    ExpandResult alice;
    ExpandResult bob;
    EveTap tap;
};

/// Both actors in one process over an in-process duplex, lockstep.
ExpandPairResult expand_key_lockstep(KeyPool& alice_pool, KeyPool& bob_pool,
                                     const DhmParams& params, uint64_t alice_seed,
                                     uint64_t bob_seed);

}  // namespace hkd
