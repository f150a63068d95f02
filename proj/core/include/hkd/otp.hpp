#pragma once

#include <utility>

#include "hkd/bitstring.hpp"
#include "hkd/keypool.hpp"

namespace hkd {

/// Bitwise XOR of data and pad. Lengths must match exactly; the pad is never
/// truncated or cycled. Involution: otp_apply(otp_apply(m, k), k) == m.
BitString otp_apply(const BitString& data, const BitString& pad);

/// Draws len(data) fresh bits and XORs. Atomic: a pool that cannot cover the
/// data is left untouched.
std::pair<BitString, PadReceipt> otp_encrypt_with_pool(const BitString& data, KeyPool& pool);

/// Identical pad discipline as encryption; decryption is the same XOR against
/// the peer-aligned interval.
std::pair<BitString, PadReceipt> otp_decrypt_with_pool(const BitString& data, KeyPool& pool);

}  // namespace hkd
