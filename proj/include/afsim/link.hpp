#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "afsim/packet.hpp"
#include "afsim/queue.hpp"
#include "afsim/simulator.hpp"

namespace afsim {

struct LinkParams {
  std::int64_t bandwidth_bps = 0;
  SimTime one_way_delay;
};

struct LinkCounters {
  std::uint64_t arrivals = 0;   // offered to the queue
  std::uint64_t dropped = 0;
  std::uint64_t delivered = 0;  // handed to the receiver at the far end
  std::array<std::uint64_t, kColorCount> dropped_by_color{};
};

// Unidirectional point-to-point link: queue, one transmitter, propagation.
class Link {
 public:
  using Receiver = std::function<void(const Packet&)>;
  using DropObserver = std::function<void(const Packet&, EnqueueOutcome)>;

  Link(Simulator& sim, std::string name, LinkParams params, std::unique_ptr<PacketQueue> queue);
  Link(const Link&) = delete;
  Link& operator=(const Link&) = delete;

  void set_receiver(Receiver r) { receiver_ = std::move(r); }
  void set_drop_observer(DropObserver o) { drop_observer_ = std::move(o); }

  // Offers a packet to the link queue and starts the transmitter if idle.
  EnqueueOutcome send(const Packet& p);

  const std::string& name() const { return name_; }
  const LinkParams& params() const { return params_; }
  const PacketQueue& queue() const { return *queue_; }
  const LinkCounters& counters() const { return counters_; }
  bool busy() const { return transmitting_.has_value(); }

  // Packets accepted but not yet delivered: queued, on the wire, propagating.
  std::uint64_t in_system() const;

 private:
  void start_transmission();
  void on_transmit_done();
  void on_arrival();

  Simulator& sim_;
  std::string name_;
  LinkParams params_;
  std::unique_ptr<PacketQueue> queue_;
  std::optional<Packet> transmitting_;
  std::deque<Packet> propagating_;
  Receiver receiver_;
  DropObserver drop_observer_;
  LinkCounters counters_;
};

}  // namespace afsim
