#include "afsim/link.hpp"

namespace afsim {

Link::Link(Simulator& sim, std::string name, LinkParams params, std::unique_ptr<PacketQueue> queue)
    : sim_(sim), name_(std::move(name)), params_(params), queue_(std::move(queue)) {
  if (params_.bandwidth_bps <= 0) throw std::invalid_argument("link " + name_ + ": bandwidth must be positive");
  if (!queue_) throw std::invalid_argument("link " + name_ + ": missing queue");
}

EnqueueOutcome Link::send(const Packet& p) {
  ++counters_.arrivals;
  const EnqueueOutcome outcome = queue_->enqueue(p, sim_.now());
  if (!accepted(outcome)) {
    ++counters_.dropped;
    ++counters_.dropped_by_color[index_of(p.color)];
    if (drop_observer_) drop_observer_(p, outcome);
    return outcome;
  }
  if (!transmitting_) start_transmission();
  return outcome;
}

std::uint64_t Link::in_system() const {
  return queue_->occupancy() + (transmitting_ ? 1 : 0) + propagating_.size();
}

void Link::start_transmission() {
  transmitting_ = queue_->dequeue();
  if (!transmitting_) return;
  sim_.schedule_in(serialization_time(transmitting_->size_bytes, params_.bandwidth_bps),
                   [this] { on_transmit_done(); });
}

void Link::on_transmit_done() {
  propagating_.push_back(*transmitting_);
  transmitting_.reset();
  // Constant delay keeps arrivals in departure order, so the event only
  // needs to pop the front of the propagation pipe.
  sim_.schedule_in(params_.one_way_delay, [this] { on_arrival(); });
  start_transmission();
}

void Link::on_arrival() {
  Packet p = propagating_.front();
  propagating_.pop_front();
  ++counters_.delivered;
  if (receiver_) receiver_(p);
}

}  // namespace afsim
