#include "hkd/bitstring.hpp"

#include <stdexcept>

namespace hkd {

namespace {

int hex_digit(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

}  // namespace

BitString::BitString(std::vector<uint8_t> bits) : bits_(std::move(bits)) {
    for (auto& b : bits_) b &= 1;
}

BitString BitString::zeros(size_t n) {
    BitString out;
    out.bits_.assign(n, 0);
    return out;
}

BitString BitString::from_uint64(uint64_t value, size_t width) {
    if (width > 64) throw std::invalid_argument("from_uint64: width > 64");
    BitString out;
    out.bits_.resize(width);
    for (size_t i = 0; i < width; ++i)
        out.bits_[i] = static_cast<uint8_t>((value >> (width - 1 - i)) & 1);
    return out;
}

BitString BitString::from_bytes(const std::vector<uint8_t>& bytes) {
    return from_packed(bytes, bytes.size() * 8);
}

BitString BitString::from_packed(const std::vector<uint8_t>& bytes, size_t nbits) {
    if (nbits > bytes.size() * 8)
        throw std::invalid_argument("from_packed: not enough bytes for requested bits");
    BitString out;
    out.bits_.resize(nbits);
    for (size_t i = 0; i < nbits; ++i)
        out.bits_[i] = (bytes[i / 8] >> (7 - i % 8)) & 1;
    return out;
}

BitString BitString::from_hex(const std::string& hex, size_t nbits) {
    if (hex.size() % 2 != 0) throw std::invalid_argument("from_hex: odd digit count");
    std::vector<uint8_t> bytes;
    bytes.reserve(hex.size() / 2);
    for (size_t i = 0; i < hex.size(); i += 2) {
        int hi = hex_digit(hex[i]);
        int lo = hex_digit(hex[i + 1]);
        if (hi < 0 || lo < 0) throw std::invalid_argument("from_hex: bad hex digit");
        bytes.push_back(static_cast<uint8_t>(hi << 4 | lo));
    }
    return from_packed(bytes, nbits);
}

BitString BitString::from_string(const std::string& s) {
    BitString out;
    out.bits_.reserve(s.size());
    for (char c : s) {
        if (c != '0' && c != '1') throw std::invalid_argument("from_string: expected '0'/'1'");
        out.bits_.push_back(c == '1');
    }
    return out;
}

void BitString::append(const BitString& other) {
    bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end());
}

BitString BitString::slice(size_t start, size_t len) const {
    if (start + len > bits_.size()) throw std::out_of_range("slice: out of range");
    BitString out;
    out.bits_.assign(bits_.begin() + start, bits_.begin() + start + len);
    return out;
}

std::vector<uint8_t> BitString::to_packed() const {
    std::vector<uint8_t> bytes((bits_.size() + 7) / 8, 0);
    for (size_t i = 0; i < bits_.size(); ++i)
        if (bits_[i]) bytes[i / 8] |= static_cast<uint8_t>(1u << (7 - i % 8));
    return bytes;
}

std::string BitString::to_hex() const {
    static const char* digits = "0123456789abcdef";
    auto bytes = to_packed();
    std::string out;
    out.reserve(bytes.size() * 2);
    for (uint8_t b : bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xf]);
    }
    return out;
}

std::string BitString::to_string() const {
    std::string out;
    out.reserve(bits_.size());
    for (uint8_t b : bits_) out.push_back(b ? '1' : '0');
    return out;
}

uint64_t BitString::to_uint64() const {
    if (bits_.size() > 64) throw std::invalid_argument("to_uint64: too many bits");
    uint64_t v = 0;
    for (uint8_t b : bits_) v = (v << 1) | b;
    return v;
}

}  // namespace hkd
