#include "afsim/simulator.hpp"

#include <algorithm>
#include <exception>

namespace afsim {

EventHandle Simulator::schedule(SimTime at, Action action) {
  if (at < now_) {
    throw SchedulingError("cannot schedule at " + at.to_string() + ", clock is " + now_.to_string());
  }
  std::uint32_t slot;
  if (!free_slots_.empty()) {
    slot = free_slots_.back();
    free_slots_.pop_back();
  } else {
    slot = static_cast<std::uint32_t>(slots_.size());
    slots_.emplace_back();
  }
  const std::uint64_t seq = next_sequence_++;
  Slot& s = slots_[slot];
  s.sequence = seq;
  s.armed = true;
  s.action = std::move(action);
  heap_.push_back({at.ns(), seq, slot});
  std::push_heap(heap_.begin(), heap_.end(), Later{});
  ++live_;
  return {slot, seq};
}

bool Simulator::pending(EventHandle handle) const {
  if (!handle.valid() || handle.slot >= slots_.size()) return false;
  const Slot& s = slots_[handle.slot];
  return s.armed && s.sequence == handle.sequence;
}

bool Simulator::cancel(EventHandle handle) {
  if (!pending(handle)) return false;
  // The heap entry stays behind and is skipped when popped.
  Slot& s = slots_[handle.slot];
  s.armed = false;
  s.action = nullptr;
  --live_;
  return true;
}

void Simulator::release(std::uint32_t slot) { free_slots_.push_back(slot); }

RunSummary Simulator::run(SimTime until) {
  const std::uint64_t start_count = dispatched_;
  while (!heap_.empty() && heap_.front().time <= until.ns()) {
    std::pop_heap(heap_.begin(), heap_.end(), Later{});
    const Entry e = heap_.back();
    heap_.pop_back();
    Slot& s = slots_[e.slot];
    if (!s.armed || s.sequence != e.sequence) {
      // Cancelled. The slot was parked until its heap entry drained.
      if (s.sequence == e.sequence) release(e.slot);
      continue;
    }
    Action action = std::move(s.action);
    s.armed = false;
    s.action = nullptr;
    release(e.slot);
    --live_;
    now_ = SimTime::from_ns(e.time);
    ++dispatched_;
    if (trace_) trace_(now_, e.sequence);
    try {
      action();
    } catch (const SimulationError&) {
      throw;
    } catch (const std::exception& ex) {
      throw SimulationError(std::string("event handler failed at ") + now_.to_string() + " (event #" +
                                std::to_string(e.sequence) + "): " + ex.what(),
                            now_, e.sequence);
    }
  }
  if (until > now_) now_ = until;
  return {dispatched_ - start_count, now_};
}

}  // namespace afsim
