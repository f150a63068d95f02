#include "hkd/keyfile.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hkd {

void write_key_file(std::ostream& os, const KeyFile& kf) {
    os << "HBKv1 " << kf.material.size() << ' ' << kf.origin;
    if (kf.partial) os << " partial";
    os << '\n' << kf.material.to_hex() << '\n';
}

void write_key_file(const std::string& path, const KeyFile& kf) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open key file for writing: " + path);
    write_key_file(os, kf);
    if (!os) throw std::runtime_error("write failed: " + path);
}

KeyFile read_key_file(std::istream& is) {
    std::string header;
    if (!std::getline(is, header)) throw std::runtime_error("key file: missing header");
    std::istringstream hs(header);
    std::string magic, origin, flag;
    size_t nbits = 0;
    hs >> magic >> nbits >> origin;
    if (magic != "HBKv1" || origin.empty())
        throw std::runtime_error("key file: bad header '" + header + "'");
    KeyFile kf;
    kf.origin = origin;
    if (hs >> flag) {
        if (flag != "partial") throw std::runtime_error("key file: unknown flag '" + flag + "'");
        kf.partial = true;
    }
    std::string hex;
    if (!std::getline(is, hex)) throw std::runtime_error("key file: missing material line");
    if (hex.size() != ((nbits + 7) / 8) * 2)
        throw std::runtime_error("key file: material length does not match header");
    kf.material = BitString::from_hex(hex, nbits);
    return kf;
}

KeyFile read_key_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open key file: " + path);
    return read_key_file(is);
}

}  // namespace hkd
