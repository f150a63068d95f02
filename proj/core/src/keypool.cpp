#include "hkd/keypool.hpp"

#include <atomic>

namespace hkd {

namespace {

uint64_t next_pool_id() {
    static std::atomic<uint64_t> counter{1};
    return counter.fetch_add(1);
}

}  // namespace

KeyPool::KeyPool(BitString material, std::string origin)
    : material_(std::move(material)), origin_(std::move(origin)), id_(next_pool_id()) {
    if (material_.empty()) throw std::invalid_argument("key pool: empty material");
}

KeyPool::KeyPool(BitString material, std::string origin, ReplenishFn replenish)
    : material_(std::move(material)),
      origin_(std::move(origin)),
      mode_(PoolMode::Replenish),
      replenish_(std::move(replenish)),
      id_(next_pool_id()) {
    if (material_.empty()) throw std::invalid_argument("key pool: empty material");
    if (!replenish_) throw std::invalid_argument("key pool: replenish mode needs a callback");
}

std::pair<BitString, PadReceipt> KeyPool::draw(size_t n) {
    if (n == 0) throw std::invalid_argument("key pool: zero-bit draw");
    if (n > remaining()) {
        if (mode_ == PoolMode::Replenish) {
            size_t need = n - remaining();
            BitString fresh = replenish_(need);
            if (fresh.size() < need) throw PoolExhausted(n, remaining() + fresh.size());
            material_.append(fresh);
        } else {
            throw PoolExhausted(n, remaining());
        }
    }
    PadReceipt receipt{cursor_, n, id_};
    BitString bits = material_.slice(cursor_, n);
    cursor_ += n;
    receipts_.push_back(receipt);
    return {std::move(bits), receipt};
}

std::vector<std::pair<uint64_t, uint64_t>> KeyPool::consumed_ranges() const {
    std::vector<std::pair<uint64_t, uint64_t>> out;
    out.reserve(receipts_.size());
    for (const auto& r : receipts_) out.emplace_back(r.start_index, r.length);
    return out;
}

KeyPool pool_create(BitString material, std::string origin) {
    return KeyPool(std::move(material), std::move(origin));
}

}  // namespace hkd
