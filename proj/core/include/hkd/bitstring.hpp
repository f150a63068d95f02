#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hkd {

/// Ordered finite sequence of bits. Serialization is MSB-first within each
/// byte; a final partial byte is zero-padded on the right.
class BitString {
public:
    BitString() = default;
    explicit BitString(std::vector<uint8_t> bits);

    static BitString zeros(size_t n);
    /// Low `width` bits of `value`, most significant first.
    static BitString from_uint64(uint64_t value, size_t width);
    /// Unpacks all 8*bytes.size() bits, MSB-first per byte.
    static BitString from_bytes(const std::vector<uint8_t>& bytes);
    /// Unpacks exactly `nbits` bits from MSB-first packed bytes.
    static BitString from_packed(const std::vector<uint8_t>& bytes, size_t nbits);
    static BitString from_hex(const std::string& hex, size_t nbits);
    /// Parses a string of '0'/'1' characters.
    static BitString from_string(const std::string& s);

    size_t size() const { return bits_.size(); }
    bool empty() const { return bits_.empty(); }

    uint8_t bit(size_t i) const { return bits_[i]; }
    void set_bit(size_t i, uint8_t v) { bits_[i] = v & 1; }

    void append_bit(uint8_t v) { bits_.push_back(v & 1); }
    void append(const BitString& other);

    BitString slice(size_t start, size_t len) const;

    /// Packs MSB-first, final partial byte zero-padded on the right.
    std::vector<uint8_t> to_packed() const;
    std::string to_hex() const;
    std::string to_string() const;
    /// Interprets the bits as a big-endian unsigned integer (size() <= 64).
    uint64_t to_uint64() const;

    const std::vector<uint8_t>& raw() const { return bits_; }

    bool operator==(const BitString& other) const { return bits_ == other.bits_; }
    bool operator!=(const BitString& other) const { return bits_ != other.bits_; }

private:
    std::vector<uint8_t> bits_;  // one element per bit, each 0 or 1
};

}  // namespace hkd
