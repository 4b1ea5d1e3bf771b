#include "afsim/scenario.hpp"

#include <sstream>

namespace afsim {

ScenarioConfig reference_scenario(const ReferenceSetup& setup) {
  ScenarioConfig cfg;
  cfg.red.limit = 60;
  cfg.red.weight = 0.002;
  cfg.red.policy = RedPolicy::SAMT;
  cfg.red.params = {setup.green, setup.yellow, setup.red};
  for (int c = 1; c <= 10; ++c) {
    CustomerConfig cust;
    cust.traffic = c == 10 ? TrafficType::Udp : TrafficType::Tcp;
    cust.flows = c == 10 ? 1 : 5;
    cust.profile.green_rate_bps = setup.green_rate_bps;
    cust.profile.green_bucket_bytes = cfg.bucket_bytes(setup.green_bucket_packets);
    if (cust.traffic == TrafficType::Tcp && setup.yellow_rate_bps > 0) {
      cust.profile.yellow_rate_bps = setup.yellow_rate_bps;
      cust.profile.yellow_bucket_bytes = cfg.bucket_bytes(setup.yellow_bucket_packets);
    }
    cfg.customers.push_back(cust);
  }
  return cfg;
}

std::vector<std::string> validation_problems(const ScenarioConfig& config) {
  std::vector<std::string> out;
  if (config.customers.empty()) out.emplace_back("customers: at least one customer is required");
  if (config.packet_bytes <= 0) out.emplace_back("general.packet_size must be positive");
  if (config.ack_bytes <= 0) out.emplace_back("general.ack_size must be positive");
  if (config.udp_rate_bps <= 0) out.emplace_back("general.udp_rate must be positive");
  if (config.tcp.max_window < 1.0) out.emplace_back("general.tcp_window must be at least 1");
  if (config.tcp.rto_min <= 0.0) out.emplace_back("general.rto_min must be positive");

  const std::pair<const char*, const LinkSpec*> links[] = {{"links.access", &config.access},
                                                           {"links.edge", &config.edge},
                                                           {"links.uplink", &config.uplink},
                                                           {"links.downlink", &config.downlink},
                                                           {"links.sink", &config.sink}};
  for (const auto& [name, spec] : links) {
    if (spec->bandwidth_bps <= 0) out.push_back(std::string(name) + "_bandwidth must be positive");
    if (spec->queue_limit == 0) out.push_back(std::string(name) + "_queue must be positive");
  }

  try {
    validate(config.red);
  } catch (const ConfigError& e) {
    out.push_back(std::string("red: ") + e.what());
  }

  for (std::size_t i = 0; i < config.customers.size(); ++i) {
    const CustomerConfig& c = config.customers[i];
    const std::string prefix = "customer." + std::to_string(i + 1) + ".";
    if (c.flows < 1) out.push_back(prefix + "flows must be at least 1");
    if (c.traffic == TrafficType::Udp && c.flows != 1) out.push_back(prefix + "flows must be 1 for udp");
    if (c.profile.green_rate_bps <= 0) out.push_back(prefix + "green_rate must be positive");
    if (c.profile.green_bucket_bytes < config.packet_bytes) {
      out.push_back(prefix + "green_bucket must hold at least one packet");
    }
    if (c.profile.yellow_rate_bps < 0) out.push_back(prefix + "yellow_rate must be non-negative");
    if (c.profile.yellow_rate_bps > 0 && c.profile.yellow_bucket_bytes < config.packet_bytes) {
      out.push_back(prefix + "yellow_bucket must hold at least one packet");
    }
  }
  return out;
}

void validate(const ScenarioConfig& config) {
  const auto problems = validation_problems(config);
  if (problems.empty()) return;
  std::ostringstream msg;
  msg << "invalid scenario:";
  for (const auto& p : problems) msg << "\n  " << p;
  throw ConfigError(msg.str());
}

}  // namespace afsim
