#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>

#include "afsim/packet.hpp"

namespace afsim {

class MetricError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Bytes received at a customer's traffic destination, split by color.
struct CustomerStats {
  int customer_id = 0;
  std::array<std::uint64_t, kColorCount> delivered_bytes{};
  std::array<std::uint64_t, kColorCount> delivered_packets{};
  double duration_s = 0.0;

  void record(const Packet& p) {
    delivered_bytes[index_of(p.color)] += static_cast<std::uint64_t>(p.size_bytes);
    ++delivered_packets[index_of(p.color)];
  }
};

double green_throughput(const CustomerStats& stats);

// Green throughput over the reserved rate. Can exceed 1 by at most the
// initial bucket content spread over the run.
double reserved_rate_utilization(const CustomerStats& stats, double green_rate_bps);

// Yellow plus red throughput in bps.
double excess_throughput(const CustomerStats& stats);

// (sum x)^2 / (n sum x^2). An all-zero vector yields 0.
double fairness_index(std::span<const double> x);

}  // namespace afsim
