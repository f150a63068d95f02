#include "hkd/otp.hpp"

#include <stdexcept>

namespace hkd {

BitString otp_apply(const BitString& data, const BitString& pad) {
    if (data.size() != pad.size())
        throw std::invalid_argument("otp_apply: data/pad length mismatch (" +
                                    std::to_string(data.size()) + " vs " +
                                    std::to_string(pad.size()) + ")");
    BitString out = data;
    for (size_t i = 0; i < out.size(); ++i) out.set_bit(i, out.bit(i) ^ pad.bit(i));
    return out;
}

std::pair<BitString, PadReceipt> otp_encrypt_with_pool(const BitString& data, KeyPool& pool) {
    if (data.empty()) throw std::invalid_argument("otp_encrypt_with_pool: empty data");
    // draw() throws before consuming anything, so failure leaves the ledger intact
    auto [pad, receipt] = pool.draw(data.size());
    return {otp_apply(data, pad), receipt};
}

std::pair<BitString, PadReceipt> otp_decrypt_with_pool(const BitString& data, KeyPool& pool) {
    return otp_encrypt_with_pool(data, pool);
}

}  // namespace hkd
