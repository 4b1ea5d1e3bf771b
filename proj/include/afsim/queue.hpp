#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>

#include "afsim/packet.hpp"

namespace afsim {

enum class EnqueueOutcome : std::uint8_t { Accepted, EarlyDrop, OverflowDrop };

inline bool accepted(EnqueueOutcome o) { return o == EnqueueOutcome::Accepted; }

// FIFO packet buffer attached to the sending side of a link. Occupancy
// excludes the packet currently being serialized.
class PacketQueue {
 public:
  virtual ~PacketQueue() = default;
  virtual EnqueueOutcome enqueue(const Packet& p, SimTime now) = 0;
  virtual std::optional<Packet> dequeue() = 0;
  virtual std::size_t occupancy() const = 0;
  virtual std::size_t limit() const = 0;
};

class DropTailQueue final : public PacketQueue {
 public:
  explicit DropTailQueue(std::size_t limit_packets = 60) : limit_(limit_packets) {}

  EnqueueOutcome enqueue(const Packet& p, SimTime now) override;
  std::optional<Packet> dequeue() override;
  std::size_t occupancy() const override { return buffer_.size(); }
  std::size_t limit() const override { return limit_; }

 private:
  std::size_t limit_;
  std::deque<Packet> buffer_;
};

}  // namespace afsim
