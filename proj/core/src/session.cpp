#include "hkd/session.hpp"

#include <bit>
#include <exception>
#include <istream>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "hkd/amplify.hpp"
#include "hkd/otp.hpp"
#include "hkd/rng.hpp"

namespace hkd {

namespace {

void put_u32_be(std::vector<uint8_t>& out, uint32_t v) {
    for (int shift = 24; shift >= 0; shift -= 8)
        out.push_back(static_cast<uint8_t>((v >> shift) & 0xff));
}

void put_u64_be(std::vector<uint8_t>& out, uint64_t v) {
    for (int shift = 56; shift >= 0; shift -= 8)
        out.push_back(static_cast<uint8_t>((v >> shift) & 0xff));
}

void put_f64_be(std::vector<uint8_t>& out, double v) {
    put_u64_be(out, std::bit_cast<uint64_t>(v));
}

uint64_t read_u64_be(const uint8_t* p) {
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | p[i];
    return v;
}

// HELLO carries every parameter both sides must agree on, in a fixed layout:
//   "HKD1" | mode | source | prime_bits | k_bits | rounds | prime_gen_rounds
//   | amplify_rounds | data_messages | per_round_cost
//   | source-specific block (KLJN physics or injected length).
// Seeds and key material are deliberately absent: HELLO is cleartext.
std::vector<uint8_t> hello_payload(const SessionConfig& cfg) {
    std::vector<uint8_t> out = {'H', 'K', 'D', '1'};
    out.push_back(static_cast<uint8_t>(cfg.pool_mode));
    out.push_back(cfg.kljn ? 1 : 0);
    put_u32_be(out, cfg.dhm.prime_bits);
    put_u32_be(out, cfg.dhm.k_bits);
    put_u32_be(out, static_cast<uint32_t>(cfg.dhm.rounds));
    put_u32_be(out, static_cast<uint32_t>(cfg.dhm.prime_gen_rounds));
    put_u32_be(out, static_cast<uint32_t>(cfg.amplify_rounds));
    put_u32_be(out, cfg.data_messages);
    put_u64_be(out, per_round_pool_cost(cfg.dhm));
    if (cfg.kljn) {
        put_u64_be(out, cfg.kljn->periods);
        put_u64_be(out, cfg.kljn->samples_per_period);
        put_f64_be(out, cfg.kljn->r_low);
        put_f64_be(out, cfg.kljn->r_high);
        put_f64_be(out, cfg.kljn->noise_scale);
    } else {
        put_u64_be(out, cfg.injected_material->size());
    }
    return out;
}

struct KljnReplenishState {
    KljnConfig base;
    Side side;
    size_t amplify_rounds;
    uint64_t chunk = 0;
};

WireFrame abort_frame(uint8_t reason) { return WireFrame{FrameType::Abort, {reason}}; }

}  // namespace

// Replenishment must be bit-identical on both sides: the pools consume in
// lockstep, so the callbacks fire with the same min_bits sequence, and the
// material below is derived only from shared parameters.
KeyPool::ReplenishFn make_replenisher(const SessionConfig& cfg, Side side) {
    if (!cfg.kljn) {
        auto rng = std::make_shared<Rng>(substream_seed(cfg.replenish_seed, 0x5eedull));
        return [rng](size_t min_bits) {
            return rng->next_bits(std::max<size_t>(min_bits, 1024));
        };
    }
    auto state = std::make_shared<KljnReplenishState>(
        KljnReplenishState{*cfg.kljn, side, cfg.amplify_rounds, 0});
    return [state](size_t min_bits) {
        BitString out;
        while (out.size() < min_bits) {
            size_t want = std::max<size_t>(min_bits - out.size(), 256);
            KljnConfig c = state->base;
            // A period yields a usable bit about half the time; amplification
            // halves the count per round. Budget 3x the expectation.
            c.periods = (want << state->amplify_rounds) * 6 + 64;
            c.seed = substream_seed(state->base.seed, (1ull << 32) + state->chunk);
            ++state->chunk;
            RawExchangeResult ex = run_exchange(c);
            BitString own = state->side == Side::Alice ? ex.alice_key : ex.bob_key;
            if (own.size() < (1ull << state->amplify_rounds)) continue;  // try next chunk
            out.append(state->amplify_rounds ? xor_amplify(own, state->amplify_rounds) : own);
        }
        return out;
    };
}

const char* phase_name(Phase p) {
    switch (p) {
        case Phase::Idle: return "Idle";
        case Phase::PhysicalExchange: return "PhysicalExchange";
        case Phase::Amplified: return "Amplified";
        case Phase::Expanding: return "Expanding";
        case Phase::Ready: return "Ready";
        case Phase::Exhausted: return "Exhausted";
        case Phase::Aborted: return "Aborted";
    }
    return "?";
}

void SessionConfig::validate(Side side) const {
    dhm.validate();
    if (kljn && injected_material)
        throw std::invalid_argument("session: both KLJN source and injected material set");
    if (!kljn && !injected_material)
        throw std::invalid_argument("session: no key source configured");
    if (kljn) kljn->validate();
    if (injected_material && injected_material->size() == 0)
        throw std::invalid_argument("session: injected material is empty");
    if (amplify_rounds > 63) throw std::invalid_argument("session: amplify_rounds > 63");
    if (side == Side::Alice) {
        if (messages.size() != data_messages)
            throw std::invalid_argument("session: message count does not match data_messages");
        for (const auto& m : messages)
            if (m.empty()) throw std::invalid_argument("session: empty data message");
    } else if (!messages.empty()) {
        throw std::invalid_argument("session: only the initiator sends data messages");
    }
}

WireFrame send_secure(KeyPool& sbk_pool, const std::vector<uint8_t>& message) {
    if (message.empty()) throw std::invalid_argument("send_secure: empty message");
    const uint64_t offset = sbk_pool.cursor();
    auto [pad, receipt] = sbk_pool.draw(message.size() * 8);
    (void)receipt;
    BitString plain = BitString::from_packed(message, message.size() * 8);
    std::vector<uint8_t> payload;
    payload.reserve(8 + message.size());
    put_u64_be(payload, offset);
    std::vector<uint8_t> ct = otp_apply(plain, pad).to_packed();
    payload.insert(payload.end(), ct.begin(), ct.end());
    return WireFrame{FrameType::Data, std::move(payload)};
}

std::vector<uint8_t> receive_secure(KeyPool& sbk_pool, const WireFrame& frame) {
    if (frame.type != FrameType::Data)
        throw ProtocolError("receive_secure: expected DATA frame");
    if (frame.payload.size() < 9)
        throw ProtocolError("receive_secure: DATA payload too short");
    uint64_t offset = read_u64_be(frame.payload.data());
    if (offset != sbk_pool.cursor())
        throw DesyncError("pad offset " + std::to_string(offset) + " does not match cursor " +
                          std::to_string(sbk_pool.cursor()));
    size_t nbytes = frame.payload.size() - 8;
    auto [pad, receipt] = sbk_pool.draw(nbytes * 8);
    (void)receipt;
    BitString ct = BitString::from_packed(
        std::vector<uint8_t>(frame.payload.begin() + 8, frame.payload.end()), nbytes * 8);
    return otp_apply(ct, pad).to_packed();
}

namespace {
PartyResult run_party_inner(Side side, const SessionConfig& cfg, FrameChannel& channel);
}

PartyResult run_party(Side side, const SessionConfig& cfg, FrameChannel& channel) {
    try {
        return run_party_inner(side, cfg, channel);
    } catch (...) {
        // Protocol-level exits (exhaustion, desync) already notified the peer
        // before returning; anything escaping here is unexpected, and a peer
        // blocked in recv would otherwise wait forever. Best effort only: the
        // channel itself may be what failed.
        try {
            channel.send(WireFrame{FrameType::Abort, {kAbortInternal}});
        } catch (...) {
        }
        throw;
    }
}

namespace {
PartyResult run_party_inner(Side side, const SessionConfig& cfg, FrameChannel& channel) {
    cfg.validate(side);
    PartyResult res;
    res.per_round_cost = per_round_pool_cost(cfg.dhm);

    // Parameter agreement. A mismatch is decided locally on byte inequality;
    // no ABORT frame is sent, so a disagreeing pair leaves only the two
    // HELLOs on the wire.
    std::vector<uint8_t> hello = hello_payload(cfg);
    channel.send(WireFrame{FrameType::Hello, hello});
    WireFrame peer_hello = channel.recv();
    if (peer_hello.type != FrameType::Hello || peer_hello.payload != hello) {
        res.phase = Phase::Aborted;
        res.abort_reason = "hello-mismatch";
        return res;
    }

    res.phase = Phase::PhysicalExchange;
    BitString raw;
    if (cfg.kljn) {
        RawExchangeResult ex = run_exchange(*cfg.kljn);
        raw = side == Side::Alice ? ex.alice_key : ex.bob_key;
    } else {
        raw = *cfg.injected_material;
    }

    res.hbk = cfg.amplify_rounds ? xor_amplify(raw, cfg.amplify_rounds) : raw;
    res.phase = Phase::Amplified;

    const std::string origin = cfg.kljn ? "physical" : "test-injected";
    KeyPool pool = cfg.pool_mode == PoolMode::Replenish
                       ? KeyPool(res.hbk, origin, make_replenisher(cfg, side))
                       : KeyPool(res.hbk, origin);

    res.phase = Phase::Expanding;
    Rng secrets(substream_seed(cfg.seed, side == Side::Alice ? 0xa11ceull : 0xb0bull));
    res.expand = expand_key(pool, cfg.dhm, channel, side, secrets);
    res.expand_receipts = pool.receipts();
    res.hbk_bits = pool.size();
    res.hbk_consumed = pool.total_consumed();
    res.soft_key = res.expand.key;

    if (res.expand.partial) {
        res.phase = Phase::Exhausted;
        res.abort_reason = res.expand.cause == PartialCause::PoolExhausted ? "pool-exhausted"
                                                                           : "peer-exhausted";
        return res;
    }

    res.phase = Phase::Ready;
    if (cfg.data_messages == 0) return res;

    KeyPool sbk(res.expand.key.material, "expanded");
    if (side == Side::Alice) {
        for (const auto& message : cfg.messages) {
            WireFrame frame;
            try {
                frame = send_secure(sbk, message);
            } catch (const PoolExhausted&) {
                channel.send(abort_frame(kAbortExhausted));
                res.sbk_consumed = sbk.total_consumed();
                res.phase = Phase::Exhausted;
                res.abort_reason = "sbk-exhausted";
                return res;
            }
            channel.send(frame);
        }
    } else {
        for (uint32_t i = 0; i < cfg.data_messages; ++i) {
            WireFrame frame = channel.recv();
            if (frame.type == FrameType::Abort) {
                bool exhausted = !frame.payload.empty() && frame.payload[0] == kAbortExhausted;
                res.sbk_consumed = sbk.total_consumed();
                res.phase = exhausted ? Phase::Exhausted : Phase::Aborted;
                res.abort_reason = exhausted ? "peer-exhausted" : "peer-abort";
                return res;
            }
            try {
                res.received.push_back(receive_secure(sbk, frame));
            } catch (const DesyncError&) {
                channel.send(abort_frame(kAbortDesync));
                res.sbk_consumed = sbk.total_consumed();
                res.phase = Phase::Aborted;
                res.abort_reason = "desync";
                return res;
            } catch (const PoolExhausted&) {
                channel.send(abort_frame(kAbortExhausted));
                res.sbk_consumed = sbk.total_consumed();
                res.phase = Phase::Exhausted;
                res.abort_reason = "sbk-exhausted";
                return res;
            }
        }
    }
    res.sbk_consumed = sbk.total_consumed();
    return res;
}
}  // namespace

SessionOutcome run_session(const SessionConfig& alice_cfg, const SessionConfig& bob_cfg) {
    // Config errors surface here, synchronously, instead of as one dead actor
    // thread whose peer would block on the handshake.
    alice_cfg.validate(Side::Alice);
    bob_cfg.validate(Side::Bob);
    InProcessDuplex duplex;
    SessionOutcome out;
    std::exception_ptr alice_err, bob_err;
    std::thread alice([&] {
        try {
            out.alice = run_party(Side::Alice, alice_cfg, duplex.alice());
        } catch (...) {
            alice_err = std::current_exception();
        }
    });
    std::thread bob([&] {
        try {
            out.bob = run_party(Side::Bob, bob_cfg, duplex.bob());
        } catch (...) {
            bob_err = std::current_exception();
        }
    });
    alice.join();
    bob.join();
    if (alice_err) std::rethrow_exception(alice_err);
    if (bob_err) std::rethrow_exception(bob_err);
    out.tap = duplex.tap();
    return out;
}

void write_session_transcript(std::ostream& os, const EveTap& tap, const PartyResult& alice) {
    write_tap(os, tap);
    os << "# hbk_bits " << alice.hbk_bits << "\n"
       << "# hbk_consumed " << alice.hbk_consumed << "\n"
       << "# sbk_bits " << (alice.soft_key ? alice.soft_key->material.size() : 0) << "\n"
       << "# sbk_consumed " << alice.sbk_consumed << "\n"
       << "# rounds_completed " << alice.expand.rounds_completed << "\n"
       << "# rounds_rejected " << alice.expand.rounds_rejected << "\n"
       << "# per_round_cost " << alice.per_round_cost << "\n"
       << "# phase " << phase_name(alice.phase) << "\n";
    if (!alice.abort_reason.empty()) os << "# abort_reason " << alice.abort_reason << "\n";
}

TranscriptStats read_transcript_stats(std::istream& is) {
    TranscriptStats stats;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] != '#') continue;
        std::istringstream ls(line.substr(1));
        std::string key;
        uint64_t value = 0;
        if (!(ls >> key)) continue;
        if (!(ls >> value)) continue;
        if (key == "hbk_bits") stats.hbk_bits = value;
        else if (key == "hbk_consumed") stats.hbk_consumed = value;
        else if (key == "sbk_bits") stats.sbk_bits = value;
        else if (key == "sbk_consumed") stats.sbk_consumed = value;
        else if (key == "rounds_completed") stats.rounds_completed = value;
        else if (key == "rounds_rejected") stats.rounds_rejected = value;
        else if (key == "per_round_cost") stats.per_round_cost = value;
    }
    return stats;
}

void write_round_transcript(std::ostream& os, const EveTap& tap,
                            const std::vector<PadReceipt>& receipts) {
    size_t next_receipt = 0;
    long attempt = -1;
    for (const TapEntry& entry : tap.entries) {
        const WireFrame& f = entry.frame;
        if (f.type != FrameType::PrimeG && f.type != FrameType::PubVal &&
            f.type != FrameType::Abort)
            continue;
        if (f.type == FrameType::PrimeG) ++attempt;
        uint64_t start = 0, length = 0;
        if (f.type != FrameType::Abort && next_receipt < receipts.size()) {
            start = receipts[next_receipt].start_index;
            length = receipts[next_receipt].length;
            ++next_receipt;
        }
        os << (attempt < 0 ? 0 : attempt) << ' '
           << (entry.direction == Direction::AliceToBob ? "alice" : "bob") << ' '
           << frame_type_name(f.type) << ' ' << start << ' ' << length << ' ';
        if (f.payload.empty()) {
            os << '-';
        } else {
            static const char* hexdig = "0123456789abcdef";
            std::string hex;
            hex.reserve(f.payload.size() * 2);
            for (uint8_t b : f.payload) {
                hex.push_back(hexdig[b >> 4]);
                hex.push_back(hexdig[b & 0xf]);
            }
            os << hex;
        }
        os << '\n';
    }
}

int exit_code_for_phase(Phase p) {
    switch (p) {
        case Phase::Ready: return 0;
        case Phase::Exhausted: return 3;
        case Phase::Aborted: return 4;
        default: return 1;
    }
}

}  // namespace hkd
