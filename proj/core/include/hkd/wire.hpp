#pragma once

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace hkd {

class TransportError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class FrameType : uint8_t {
    Hello = 0x01,
    PrimeG = 0x02,
    PubVal = 0x03,
    Data = 0x04,
    Abort = 0x05,
};

const char* frame_type_name(FrameType t);
FrameType frame_type_from_name(const std::string& name);

/// 1-byte type, 4-byte big-endian payload length, payload bytes.
struct WireFrame {
    FrameType type;
    std::vector<uint8_t> payload;

    bool operator==(const WireFrame&) const = default;
};

std::vector<uint8_t> encode_frame(const WireFrame& frame);

enum class Direction : uint8_t { AliceToBob, BobToAlice };

struct TapEntry {
    uint64_t seq;
    Direction direction;
    WireFrame frame;
};

/// Eve's complete view of the channel: every frame, both directions, in
/// transmission order.
struct EveTap {
    std::vector<TapEntry> entries;
};

/// Line format: "seq direction frame_type hex(payload)", direction a->b or
/// b->a, "-" for an empty payload.
void write_tap(std::ostream& os, const EveTap& tap);
EveTap read_tap(std::istream& is);

/// Blocking duplex endpoint used by one protocol actor.
class FrameChannel {
public:
    virtual ~FrameChannel() = default;
    virtual void send(const WireFrame& frame) = 0;
    virtual WireFrame recv() = 0;
};

/// In-process pair of endpoints over blocking queues, with a shared tap.
/// The protocol is serial (an actor only sends on its turn), which makes the
/// tap order deterministic even though the actors run on two threads.
class InProcessDuplex {
public:
    InProcessDuplex();
    ~InProcessDuplex();

    FrameChannel& alice();
    FrameChannel& bob();

    /// Safe to call after both actors are done.
    const EveTap& tap() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Endpoint over POSIX file descriptors (two-process mode). Records the
/// frames this process sends and receives into a local tap, which for a
/// serial protocol equals the channel tap.
class FdChannel : public FrameChannel {
public:
    /// Does not take ownership of the descriptors.
    FdChannel(int read_fd, int write_fd, Direction send_direction);

    void send(const WireFrame& frame) override;
    WireFrame recv() override;

    const EveTap& tap() const { return tap_; }

private:
    int read_fd_;
    int write_fd_;
    Direction send_direction_;
    EveTap tap_;
    uint64_t seq_ = 0;
};

}  // namespace hkd
