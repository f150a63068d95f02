#pragma once

#include <iosfwd>
#include <string>

#include "hkd/bitstring.hpp"

namespace hkd {

/// On-disk key material. Format:
///   line 1: "HBKv1 <N> <origin>"  (optionally followed by "partial")
///   line 2: lowercase hex of the material, MSB-first bit packing,
///           final partial byte zero-padded on the right
struct KeyFile {
    BitString material;
    std::string origin;   // physical | test-injected | expanded
    bool partial = false; // expansion stopped early (budget exhaustion)
};

void write_key_file(std::ostream& os, const KeyFile& kf);
void write_key_file(const std::string& path, const KeyFile& kf);

KeyFile read_key_file(std::istream& is);
KeyFile read_key_file(const std::string& path);

}  // namespace hkd
