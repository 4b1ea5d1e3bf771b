#pragma once

#include <cstdint>

#include "afsim/packet.hpp"
#include "afsim/sim_time.hpp"

namespace afsim {

// Fluid token bucket. Tokens are tracked exactly as bit-nanoseconds
// (bits * 1e9) so refills at any rate in bps are integer operations.
class TokenBucket {
 public:
  TokenBucket() = default;
  // Starts full.
  TokenBucket(std::int64_t rate_bps, std::int64_t capacity_bytes);

  void refill(SimTime now);
  bool conforms(std::int64_t bytes) const { return tokens_ >= scaled(bytes); }
  // Removes `bytes` worth of tokens; caller checks conforms() first.
  void consume(std::int64_t bytes);

  std::int64_t rate_bps() const { return rate_bps_; }
  std::int64_t capacity_bytes() const { return capacity_bytes_; }
  double tokens_bytes() const { return static_cast<double>(tokens_) / (8.0 * 1e9); }
  SimTime last_refill() const { return last_refill_; }

 private:
  static constexpr std::int64_t scaled(std::int64_t bytes) { return bytes * 8 * 1000000000LL; }

  std::int64_t rate_bps_ = 0;
  std::int64_t capacity_bytes_ = 0;
  std::int64_t tokens_ = 0;
  SimTime last_refill_;
};

struct ConditionerProfile {
  std::int64_t green_rate_bps = 0;
  std::int64_t green_bucket_bytes = 0;
  std::int64_t yellow_rate_bps = 0;  // 0 selects two-color marking
  std::int64_t yellow_bucket_bytes = 0;
};

// Dual token bucket marker: green if the green bucket conforms, otherwise
// yellow if the yellow bucket conforms, otherwise red.
class TrafficConditioner {
 public:
  explicit TrafficConditioner(const ConditionerProfile& profile);

  Color mark(Packet& packet, SimTime now);

  bool two_color() const { return yellow_.rate_bps() == 0; }
  const TokenBucket& green() const { return green_; }
  const TokenBucket& yellow() const { return yellow_; }

 private:
  TokenBucket green_;
  TokenBucket yellow_;
};

}  // namespace afsim
