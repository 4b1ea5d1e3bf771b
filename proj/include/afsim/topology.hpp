#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "afsim/link.hpp"
#include "afsim/metrics.hpp"
#include "afsim/red_queue.hpp"
#include "afsim/scenario.hpp"
#include "afsim/simulator.hpp"
#include "afsim/tcp.hpp"
#include "afsim/token_bucket.hpp"

namespace afsim {

// Sources -> customer (conditioner) -> Router1 -[RED]-> Router2 (GEO)
// -> Router3 -> per-customer sink, with a DropTail reverse path for ACKs.
class Topology {
 public:
  Topology(Simulator& sim, const ScenarioConfig& config);
  Topology(const Topology&) = delete;
  Topology& operator=(const Topology&) = delete;
  ~Topology();

  // Schedules source start events.
  void start();

  std::size_t customer_count() const { return customers_.size(); }
  const CustomerStats& stats(int customer) const;
  const TrafficConditioner& conditioner(int customer) const;
  const TcpSender& tcp_sender(int customer, int flow) const;
  const TcpSinkState& tcp_sink(int customer, int flow) const;
  const UdpSource& udp_source(int customer) const;
  // RED drops at Router1, per customer and color.
  const std::array<std::uint64_t, kColorCount>& red_drops(int customer) const;

  const Link& bottleneck() const { return *uplink_; }
  const MultiColorRedQueue& red_queue() const { return *red_; }
  std::vector<const Link*> links() const;

  // Sum of propagation delays from a source of `customer` to Router3.
  SimTime propagation_to_router3() const;
  // Same, through to the sink.
  SimTime propagation_to_sink() const;

 private:
  struct Customer;

  Link& add_link(std::string name, const LinkSpec& spec, std::unique_ptr<PacketQueue> q = nullptr);
  Customer& customer(int id);
  const Customer& customer(int id) const;
  void at_sink(Customer& c, const Packet& p);

  Simulator& sim_;
  const ScenarioConfig& config_;
  std::uint64_t next_uid_ = 1;
  std::vector<std::unique_ptr<Link>> links_;
  std::vector<std::unique_ptr<Customer>> customers_;
  MultiColorRedQueue* red_ = nullptr;
  Link* uplink_ = nullptr;
  Link* uplink_reverse_ = nullptr;
  Link* downlink_ = nullptr;
  Link* downlink_reverse_ = nullptr;
};

struct LinkReport {
  std::string name;
  LinkCounters counters;
  std::uint64_t in_system = 0;
};

struct SimulationResult {
  std::vector<CustomerStats> customers;
  std::vector<std::array<std::uint64_t, kColorCount>> red_drops;  // per customer
  RedDropStats red_stats;
  std::vector<LinkReport> links;
  RunSummary summary;
  std::uint64_t trace_digest = 0;  // hash over (time, sequence) of every dispatch
};

// Validates, builds and runs one scenario to its duration.
SimulationResult simulate(const ScenarioConfig& config);

}  // namespace afsim
