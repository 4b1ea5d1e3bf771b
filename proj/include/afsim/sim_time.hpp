#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace afsim {

// Non-negative simulated time with nanosecond resolution. Integer ticks keep
// event ordering identical on every platform.
class SimTime {
 public:
  constexpr SimTime() = default;

  static constexpr SimTime from_ns(std::int64_t ns) {
    if (ns < 0) throw std::invalid_argument("SimTime cannot be negative");
    return SimTime(ns);
  }
  static constexpr SimTime from_us(std::int64_t us) { return from_ns(us * 1000); }
  static constexpr SimTime from_ms(std::int64_t ms) { return from_ns(ms * 1000000); }
  static SimTime from_seconds(double s) {
    if (!(s >= 0.0) || !std::isfinite(s)) {
      throw std::invalid_argument("SimTime seconds must be finite and non-negative");
    }
    return from_ns(std::llround(s * 1e9));
  }
  static constexpr SimTime max() { return SimTime(std::numeric_limits<std::int64_t>::max()); }

  constexpr std::int64_t ns() const { return ns_; }
  constexpr double seconds() const { return static_cast<double>(ns_) * 1e-9; }

  constexpr SimTime operator+(SimTime o) const { return SimTime(ns_ + o.ns_); }
  constexpr SimTime& operator+=(SimTime o) {
    ns_ += o.ns_;
    return *this;
  }
  // Saturates at zero; durations are never negative.
  constexpr SimTime operator-(SimTime o) const { return SimTime(ns_ > o.ns_ ? ns_ - o.ns_ : 0); }
  constexpr SimTime operator*(std::int64_t k) const { return SimTime(ns_ * k); }

  constexpr auto operator<=>(const SimTime&) const = default;

  std::string to_string() const;

 private:
  constexpr explicit SimTime(std::int64_t ns) : ns_(ns) {}
  std::int64_t ns_ = 0;
};

// Time to clock `bytes` onto a wire of `bandwidth_bps`, rounded to the nearest ns.
constexpr SimTime serialization_time(std::int64_t bytes, std::int64_t bandwidth_bps) {
  if (bandwidth_bps <= 0) throw std::invalid_argument("bandwidth must be positive");
  const std::int64_t bits_ns = bytes * 8 * 1000000000LL;
  return SimTime::from_ns((bits_ns + bandwidth_bps / 2) / bandwidth_bps);
}

}  // namespace afsim
