#include "afsim/queue.hpp"

namespace afsim {

EnqueueOutcome DropTailQueue::enqueue(const Packet& p, SimTime) {
  if (buffer_.size() >= limit_) return EnqueueOutcome::OverflowDrop;
  buffer_.push_back(p);
  return EnqueueOutcome::Accepted;
}

std::optional<Packet> DropTailQueue::dequeue() {
  if (buffer_.empty()) return std::nullopt;
  Packet p = buffer_.front();
  buffer_.pop_front();
  return p;
}

}  // namespace afsim
