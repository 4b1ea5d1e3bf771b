#include "afsim/token_bucket.hpp"

#include <stdexcept>

namespace afsim {

TokenBucket::TokenBucket(std::int64_t rate_bps, std::int64_t capacity_bytes)
    : rate_bps_(rate_bps), capacity_bytes_(capacity_bytes), tokens_(scaled(capacity_bytes)) {
  if (rate_bps < 0) throw std::invalid_argument("token rate must be non-negative");
  if (capacity_bytes < 0) throw std::invalid_argument("bucket capacity must be non-negative");
}

void TokenBucket::refill(SimTime now) {
  if (now <= last_refill_) return;
  const std::int64_t elapsed = (now - last_refill_).ns();
  last_refill_ = now;
  const std::int64_t cap = scaled(capacity_bytes_);
  const std::int64_t missing = cap - tokens_;
  if (missing <= 0 || rate_bps_ == 0) return;
  // rate * elapsed may overflow for long idle gaps; compare first.
  if (elapsed >= (missing + rate_bps_ - 1) / rate_bps_) {
    tokens_ = cap;
  } else {
    tokens_ += rate_bps_ * elapsed;
  }
}

void TokenBucket::consume(std::int64_t bytes) {
  const std::int64_t cost = scaled(bytes);
  if (cost > tokens_) throw std::logic_error("token bucket overdrawn");
  tokens_ -= cost;
}

TrafficConditioner::TrafficConditioner(const ConditionerProfile& profile)
    : green_(profile.green_rate_bps, profile.green_bucket_bytes),
      yellow_(profile.yellow_rate_bps, profile.yellow_rate_bps > 0 ? profile.yellow_bucket_bytes : 0) {}

Color TrafficConditioner::mark(Packet& packet, SimTime now) {
  green_.refill(now);
  yellow_.refill(now);
  if (green_.conforms(packet.size_bytes)) {
    green_.consume(packet.size_bytes);
    packet.color = Color::Green;
  } else if (yellow_.rate_bps() > 0 && yellow_.conforms(packet.size_bytes)) {
    yellow_.consume(packet.size_bytes);
    packet.color = Color::Yellow;
  } else {
    packet.color = Color::Red;
  }
  return packet.color;
}

}  // namespace afsim
