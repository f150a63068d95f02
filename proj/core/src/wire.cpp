#include "hkd/wire.hpp"

#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>

namespace hkd {

namespace {

const char* direction_token(Direction d) {
    return d == Direction::AliceToBob ? "a->b" : "b->a";
}

std::string to_hex(const std::vector<uint8_t>& bytes) {
    static const char* digits = "0123456789abcdef";
    if (bytes.empty()) return "-";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (uint8_t b : bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xf]);
    }
    return out;
}

std::vector<uint8_t> from_hex(const std::string& hex) {
    if (hex == "-") return {};
    if (hex.size() % 2 != 0) throw std::runtime_error("tap: odd hex length");
    auto digit = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        return -1;
    };
    std::vector<uint8_t> out;
    out.reserve(hex.size() / 2);
    for (size_t i = 0; i < hex.size(); i += 2) {
        int hi = digit(hex[i]), lo = digit(hex[i + 1]);
        if (hi < 0 || lo < 0) throw std::runtime_error("tap: bad hex digit");
        out.push_back(static_cast<uint8_t>(hi << 4 | lo));
    }
    return out;
}

}  // namespace

const char* frame_type_name(FrameType t) {
    switch (t) {
        case FrameType::Hello: return "HELLO";
        case FrameType::PrimeG: return "PRIME_G";
        case FrameType::PubVal: return "PUBVAL";
        case FrameType::Data: return "DATA";
        case FrameType::Abort: return "ABORT";
    }
    return "?";
}

FrameType frame_type_from_name(const std::string& name) {
    if (name == "HELLO") return FrameType::Hello;
    if (name == "PRIME_G") return FrameType::PrimeG;
    if (name == "PUBVAL") return FrameType::PubVal;
    if (name == "DATA") return FrameType::Data;
    if (name == "ABORT") return FrameType::Abort;
    throw std::runtime_error("unknown frame type: " + name);
}

std::vector<uint8_t> encode_frame(const WireFrame& frame) {
    std::vector<uint8_t> out;
    out.reserve(5 + frame.payload.size());
    out.push_back(static_cast<uint8_t>(frame.type));
    uint32_t len = static_cast<uint32_t>(frame.payload.size());
    out.push_back(static_cast<uint8_t>(len >> 24));
    out.push_back(static_cast<uint8_t>(len >> 16));
    out.push_back(static_cast<uint8_t>(len >> 8));
    out.push_back(static_cast<uint8_t>(len));
    out.insert(out.end(), frame.payload.begin(), frame.payload.end());
    return out;
}

void write_tap(std::ostream& os, const EveTap& tap) {
    for (const auto& e : tap.entries)
        os << e.seq << ' ' << direction_token(e.direction) << ' '
           << frame_type_name(e.frame.type) << ' ' << to_hex(e.frame.payload) << '\n';
}

EveTap read_tap(std::istream& is) {
    EveTap tap;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        uint64_t seq;
        std::string dir, type, hex;
        if (!(ls >> seq >> dir >> type >> hex)) throw std::runtime_error("tap: bad line: " + line);
        TapEntry e;
        e.seq = seq;
        if (dir == "a->b")
            e.direction = Direction::AliceToBob;
        else if (dir == "b->a")
            e.direction = Direction::BobToAlice;
        else
            throw std::runtime_error("tap: bad direction: " + dir);
        e.frame.type = frame_type_from_name(type);
        e.frame.payload = from_hex(hex);
        tap.entries.push_back(std::move(e));
    }
    return tap;
}

// ---------------------------------------------------------------------------
// In-process duplex

namespace {

class BlockingQueue {
public:
    void push(WireFrame frame) {
        {
            std::lock_guard<std::mutex> lock(mutex_);
            queue_.push_back(std::move(frame));
        }
        cv_.notify_one();
    }

    WireFrame pop() {
        std::unique_lock<std::mutex> lock(mutex_);
        cv_.wait(lock, [&] { return !queue_.empty(); });
        WireFrame f = std::move(queue_.front());
        queue_.pop_front();
        return f;
    }

private:
    std::mutex mutex_;
    std::condition_variable cv_;
    std::deque<WireFrame> queue_;
};

}  // namespace

struct InProcessDuplex::Impl {
    BlockingQueue to_bob;
    BlockingQueue to_alice;
    std::mutex tap_mutex;
    EveTap tap;
    uint64_t seq = 0;

    void record(Direction dir, const WireFrame& frame) {
        std::lock_guard<std::mutex> lock(tap_mutex);
        tap.entries.push_back({seq++, dir, frame});
    }

    class Endpoint : public FrameChannel {
    public:
        Endpoint(Impl& impl, bool is_alice) : impl_(impl), is_alice_(is_alice) {}

        void send(const WireFrame& frame) override {
            impl_.record(is_alice_ ? Direction::AliceToBob : Direction::BobToAlice, frame);
            (is_alice_ ? impl_.to_bob : impl_.to_alice).push(frame);
        }

        WireFrame recv() override { return (is_alice_ ? impl_.to_alice : impl_.to_bob).pop(); }

    private:
        Impl& impl_;
        bool is_alice_;
    };

    Endpoint alice_end{*this, true};
    Endpoint bob_end{*this, false};
};

InProcessDuplex::InProcessDuplex() : impl_(std::make_unique<Impl>()) {}
InProcessDuplex::~InProcessDuplex() = default;

FrameChannel& InProcessDuplex::alice() { return impl_->alice_end; }
FrameChannel& InProcessDuplex::bob() { return impl_->bob_end; }
const EveTap& InProcessDuplex::tap() const { return impl_->tap; }

// ---------------------------------------------------------------------------
// File-descriptor channel

FdChannel::FdChannel(int read_fd, int write_fd, Direction send_direction)
    : read_fd_(read_fd), write_fd_(write_fd), send_direction_(send_direction) {}

namespace {

void write_all(int fd, const uint8_t* data, size_t len) {
    size_t off = 0;
    while (off < len) {
        ssize_t n = ::write(fd, data + off, len - off);
        if (n < 0) {
            if (errno == EINTR) continue;
            throw TransportError(std::string("write: ") + std::strerror(errno));
        }
        off += static_cast<size_t>(n);
    }
}

void read_all(int fd, uint8_t* data, size_t len) {
    size_t off = 0;
    while (off < len) {
        ssize_t n = ::read(fd, data + off, len - off);
        if (n == 0) throw TransportError("peer closed the channel mid-frame");
        if (n < 0) {
            if (errno == EINTR) continue;
            throw TransportError(std::string("read: ") + std::strerror(errno));
        }
        off += static_cast<size_t>(n);
    }
}

}  // namespace

void FdChannel::send(const WireFrame& frame) {
    auto bytes = encode_frame(frame);
    write_all(write_fd_, bytes.data(), bytes.size());
    tap_.entries.push_back({seq_++, send_direction_, frame});
}

WireFrame FdChannel::recv() {
    uint8_t header[5];
    read_all(read_fd_, header, 5);
    WireFrame frame;
    switch (header[0]) {
        case 0x01: frame.type = FrameType::Hello; break;
        case 0x02: frame.type = FrameType::PrimeG; break;
        case 0x03: frame.type = FrameType::PubVal; break;
        case 0x04: frame.type = FrameType::Data; break;
        case 0x05: frame.type = FrameType::Abort; break;
        default: throw TransportError("unknown frame type byte");
    }
    uint32_t len = static_cast<uint32_t>(header[1]) << 24 | static_cast<uint32_t>(header[2]) << 16 |
                   static_cast<uint32_t>(header[3]) << 8 | static_cast<uint32_t>(header[4]);
    frame.payload.resize(len);
    if (len > 0) read_all(read_fd_, frame.payload.data(), len);
    Direction dir = send_direction_ == Direction::AliceToBob ? Direction::BobToAlice
                                                             : Direction::AliceToBob;
    tap_.entries.push_back({seq_++, dir, frame});
    return frame;
}

}  // namespace hkd
