#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hkd/bitstring.hpp"

namespace hkd {

/// Thrown when a pool cannot satisfy a draw. Carries the shortfall so the
/// caller can decide between aborting and replenishing.
class PoolExhausted : public std::runtime_error {
public:
    PoolExhausted(size_t requested, size_t available)
        : std::runtime_error("key pool exhausted: requested " + std::to_string(requested) +
                             " bits, " + std::to_string(available) + " available"),
          requested_(requested),
          available_(available) {}

    size_t requested() const { return requested_; }
    size_t available() const { return available_; }
    size_t shortfall() const { return requested_ - available_; }

private:
    size_t requested_;
    size_t available_;
};

/// Consumed half-open interval [start, start+length) of a pool.
struct PadReceipt {
    uint64_t start_index = 0;
    uint64_t length = 0;
    uint64_t pool_id = 0;

    bool operator==(const PadReceipt&) const = default;
};

enum class PoolMode {
    Budget,     // fixed N; draws past the end throw PoolExhausted
    Replenish,  // a callback supplies new material when the pool runs dry
};

/// Key material plus a consumption ledger. Every bit is handed out at most
/// once; consumption is contiguous from the front, and each draw is recorded
/// as a receipt so audits can replay the full allocation history.
///
/// Single-owner resource: mutation is not synchronized.
class KeyPool {
public:
    using ReplenishFn = std::function<BitString(size_t min_bits)>;

    /// Budget-mode pool. Rejects empty material.
    KeyPool(BitString material, std::string origin);
    /// Replenish-mode pool; `replenish` is invoked with the minimum number of
    /// bits needed whenever a draw would otherwise exhaust the pool.
    KeyPool(BitString material, std::string origin, ReplenishFn replenish);

    /// Next `n` unconsumed bits, in order. Throws PoolExhausted in budget
    /// mode (pool untouched); in replenish mode invokes the callback first.
    std::pair<BitString, PadReceipt> draw(size_t n);

    size_t remaining() const { return material_.size() - cursor_; }
    size_t cursor() const { return cursor_; }
    size_t size() const { return material_.size(); }
    /// Total bits ever drawn (equals cursor; replenishment never rewinds).
    uint64_t total_consumed() const { return cursor_; }

    const std::string& origin() const { return origin_; }
    PoolMode mode() const { return mode_; }
    uint64_t id() const { return id_; }

    const std::vector<PadReceipt>& receipts() const { return receipts_; }
    /// Disjoint consumed intervals as (start, length) pairs.
    std::vector<std::pair<uint64_t, uint64_t>> consumed_ranges() const;

private:
    BitString material_;
    size_t cursor_ = 0;
    std::vector<PadReceipt> receipts_;
    std::string origin_;
    PoolMode mode_ = PoolMode::Budget;
    ReplenishFn replenish_;
    uint64_t id_;
};

KeyPool pool_create(BitString material, std::string origin = "test-injected");

}  // namespace hkd
