#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "afsim/sim_time.hpp"

namespace afsim {

struct EventHandle {
  std::uint32_t slot = UINT32_MAX;
  std::uint64_t sequence = 0;
  bool valid() const { return slot != UINT32_MAX; }
};

struct RunSummary {
  std::uint64_t events_dispatched = 0;
  SimTime final_clock;
};

class SchedulingError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Raised when an event handler throws; carries the clock and event sequence.
class SimulationError : public std::runtime_error {
 public:
  SimulationError(const std::string& what, SimTime at, std::uint64_t sequence)
      : std::runtime_error(what), at_(at), sequence_(sequence) {}
  SimTime at() const { return at_; }
  std::uint64_t sequence() const { return sequence_; }

 private:
  SimTime at_;
  std::uint64_t sequence_;
};

// Single-threaded discrete-event scheduler. Events with equal fire time are
// dispatched in the order they were scheduled.
class Simulator {
 public:
  using Action = std::function<void()>;
  using TraceHook = std::function<void(SimTime, std::uint64_t)>;

  Simulator() = default;
  Simulator(const Simulator&) = delete;
  Simulator& operator=(const Simulator&) = delete;

  SimTime now() const { return now_; }

  EventHandle schedule(SimTime at, Action action);
  EventHandle schedule_in(SimTime delay, Action action) { return schedule(now_ + delay, std::move(action)); }

  // True iff the event was still pending; it will never fire afterwards.
  bool cancel(EventHandle handle);
  bool pending(EventHandle handle) const;

  RunSummary run(SimTime until);

  std::uint64_t events_dispatched() const { return dispatched_; }
  std::size_t events_pending() const { return live_; }

  // Called with (fire time, sequence) before each dispatch.
  void set_trace(TraceHook hook) { trace_ = std::move(hook); }

 private:
  struct Entry {
    std::int64_t time;
    std::uint64_t sequence;
    std::uint32_t slot;
  };
  struct Later {
    bool operator()(const Entry& a, const Entry& b) const {
      return a.time != b.time ? a.time > b.time : a.sequence > b.sequence;
    }
  };
  struct Slot {
    std::uint64_t sequence = 0;
    bool armed = false;
    Action action;
  };

  void release(std::uint32_t slot);

  SimTime now_;
  std::uint64_t next_sequence_ = 0;
  std::uint64_t dispatched_ = 0;
  std::size_t live_ = 0;
  std::vector<Entry> heap_;
  std::vector<Slot> slots_;
  std::vector<std::uint32_t> free_slots_;
  TraceHook trace_;
};

}  // namespace afsim
