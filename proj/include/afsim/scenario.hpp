#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "afsim/red_queue.hpp"
#include "afsim/sim_time.hpp"
#include "afsim/tcp.hpp"
#include "afsim/token_bucket.hpp"

namespace afsim {

enum class TrafficType : std::uint8_t { Tcp, Udp };

struct LinkSpec {
  std::int64_t bandwidth_bps = 0;
  SimTime delay;
  std::size_t queue_limit = 60;
};

struct CustomerConfig {
  TrafficType traffic = TrafficType::Tcp;
  int flows = 5;
  ConditionerProfile profile;
};

// Everything needed to build and run one simulation.
struct ScenarioConfig {
  SimTime duration = SimTime::from_seconds(100.0);
  std::uint64_t seed = 1;
  std::int32_t packet_bytes = kDataPacketBytes;
  std::int32_t ack_bytes = kAckPacketBytes;
  std::int64_t udp_rate_bps = 1'280'000;
  SimTime tcp_start_spread = SimTime::from_seconds(1.0);
  TcpRenoConfig tcp;

  LinkSpec access{10'000'000, SimTime::from_us(1), 60};      // sources <-> customer
  LinkSpec edge{1'500'000, SimTime::from_us(5), 60};         // customer <-> Router1
  LinkSpec uplink{1'500'000, SimTime::from_ms(125), 60};     // Router1 <-> Router2
  LinkSpec downlink{1'500'000, SimTime::from_ms(125), 60};   // Router2 <-> Router3
  LinkSpec sink{1'500'000, SimTime::from_us(5), 60};         // Router3 <-> sinks
  RedConfig red;

  std::vector<CustomerConfig> customers;

  std::int64_t bucket_bytes(int packets) const { return static_cast<std::int64_t>(packets) * packet_bytes; }
};

struct ReferenceSetup {
  std::int64_t green_rate_bps = 12'800;
  int green_bucket_packets = 32;
  std::int64_t yellow_rate_bps = 0;
  int yellow_bucket_packets = 0;
  RedColorParams green{40, 60, 0.1};
  RedColorParams yellow{20, 40, 0.5};
  RedColorParams red{0, 10, 1.0};
};

// Nine five-flow TCP customers and one UDP customer over the GEO path, the
// RED queue at Router1 in SAMT mode. The UDP customer never gets yellow tokens.
ScenarioConfig reference_scenario(const ReferenceSetup& setup = {});

// Field-level problems; empty when the configuration is usable.
std::vector<std::string> validation_problems(const ScenarioConfig& config);
// Throws ConfigError listing all problems.
void validate(const ScenarioConfig& config);

}  // namespace afsim
