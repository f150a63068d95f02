#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hkd/bitstring.hpp"
#include "hkd/dhm.hpp"
#include "hkd/keypool.hpp"
#include "hkd/kljn.hpp"
#include "hkd/wire.hpp"

namespace hkd {

/// SBK cursor disagreement between the two parties — unrecoverable under
/// one-time-pad discipline.
class DesyncError : public ProtocolError {
public:
    using ProtocolError::ProtocolError;
};

enum class Phase : uint8_t {
    Idle,
    PhysicalExchange,
    Amplified,
    Expanding,
    Ready,
    Exhausted,
    Aborted,
};

const char* phase_name(Phase p);

/// Per-party protocol configuration. Everything HELLO-checked must match the
/// peer; seeds and key material are shared context (or per-side randomness)
/// and never appear on the wire.
struct SessionConfig {
    // shared, HELLO-checked
    PoolMode pool_mode = PoolMode::Budget;
    DhmParams dhm;
    size_t amplify_rounds = 0;
    uint32_t data_messages = 0;
    std::optional<KljnConfig> kljn;              // physical source
    std::optional<BitString> injected_material;  // test hook replacing the exchange

    // local / shared-secret context
    uint64_t seed = 0;            // per-side randomness (secret exponents)
    uint64_t replenish_seed = 0;  // replenish stream for injected pools
    std::vector<std::vector<uint8_t>> messages;  // Alice's outgoing data

    void validate(Side side) const;
};

struct PartyResult {
    Phase phase = Phase::Idle;
    BitString hbk;  // amplified pool material as initially provisioned
    ExpandResult expand;
    std::optional<SoftKey> soft_key;
    uint64_t hbk_bits = 0;       // pool size including replenishment
    uint64_t hbk_consumed = 0;
    uint64_t sbk_consumed = 0;
    uint64_t per_round_cost = 0;
    std::vector<PadReceipt> expand_receipts;
    std::vector<std::vector<uint8_t>> received;  // decrypted DATA payloads
    std::string abort_reason;
};

/// DATA framing: payload = 8-byte big-endian SBK bit offset, then the
/// OTP ciphertext of the message bytes. The offset is consumption metadata,
/// not key material; it lets the receiver detect replay or desync before
/// consuming any pad bits.
WireFrame send_secure(KeyPool& sbk_pool, const std::vector<uint8_t>& message);
std::vector<uint8_t> receive_secure(KeyPool& sbk_pool, const WireFrame& frame);

/// Replenish callback for the configured key source. Both sides' callbacks
/// produce bit-identical material for the same min_bits sequence; only the
/// KLJN bit-extraction viewpoint depends on `side`.
KeyPool::ReplenishFn make_replenisher(const SessionConfig& cfg, Side side);

/// Drives one side through HELLO, physical exchange (or injection),
/// amplification, expansion, and the data phase.
PartyResult run_party(Side side, const SessionConfig& cfg, FrameChannel& channel);

struct SessionOutcome {
    PartyResult alice;
    PartyResult bob;
    EveTap tap;
};

/// Both actors in one process (lockstep over an in-process duplex).
SessionOutcome run_session(const SessionConfig& alice_cfg, const SessionConfig& bob_cfg);

/// Tap lines ("seq direction frame_type hex"), then '#'-prefixed stats lines
/// consumed by the throughput report.
void write_session_transcript(std::ostream& os, const EveTap& tap, const PartyResult& alice);

struct TranscriptStats {
    uint64_t hbk_bits = 0;
    uint64_t hbk_consumed = 0;
    uint64_t sbk_bits = 0;
    uint64_t sbk_consumed = 0;
    uint64_t rounds_completed = 0;
    uint64_t rounds_rejected = 0;
    uint64_t per_round_cost = 0;
};
TranscriptStats read_transcript_stats(std::istream& is);

/// Round transcript: "round_idx side frame_type pad_receipt_start
/// pad_receipt_len hex(ciphertext)". round_idx counts wire attempts
/// (rejected-and-rerun rounds included); receipts are the sender-side pool
/// intervals in frame order.
void write_round_transcript(std::ostream& os, const EveTap& tap,
                            const std::vector<PadReceipt>& receipts);

int exit_code_for_phase(Phase p);

}  // namespace hkd
