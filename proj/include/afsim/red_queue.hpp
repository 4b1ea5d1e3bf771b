#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <stdexcept>
#include <string>
#include <string_view>

#include "afsim/queue.hpp"
#include "afsim/rng.hpp"

namespace afsim {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Buffer-management taxonomy: single/multiple average accounting crossed
// with single/multiple drop thresholds.
enum class RedPolicy : std::uint8_t { SAST, SAMT, MAST, MAMT };
enum class Accounting : std::uint8_t { Single, Multiple };

// How per-color averages are fed under multiple accounting.
enum class MultiAverageScheme : std::uint8_t {
  SameOrBetter,  // color k counts packets of color k or better
  PerColor,      // color k counts only packets of color k
};

std::string_view to_string(RedPolicy p);
RedPolicy parse_red_policy(std::string_view text);
MultiAverageScheme parse_average_scheme(std::string_view text);
Accounting accounting_of(RedPolicy p);

struct RedColorParams {
  double min_th = 0.0;
  double max_th = 0.0;
  double max_p = 1.0;
  bool operator==(const RedColorParams&) const = default;
};

// 0 at or below min_th, linear up to max_p just below max_th, 1 from max_th on.
double red_drop_prob(double avg, const RedColorParams& params);

struct RedConfig {
  std::size_t limit = 60;
  double weight = 0.002;
  std::array<RedColorParams, kColorCount> params{};  // indexed by Color
  RedPolicy policy = RedPolicy::SAMT;
  MultiAverageScheme scheme = MultiAverageScheme::SameOrBetter;
  bool count_adjusted = false;  // p / (1 - count * p) spacing between drops
};

// Which policy a parameter set describes.
RedPolicy classify_policy(Accounting accounting, const std::array<RedColorParams, kColorCount>& params);

// Throws ConfigError naming every offending field.
void validate(const RedConfig& config);

struct RedDropStats {
  std::array<std::uint64_t, kColorCount> early{};
  std::array<std::uint64_t, kColorCount> overflow{};
  std::array<std::uint64_t, kColorCount> accepted{};
};

class MultiColorRedQueue final : public PacketQueue {
 public:
  MultiColorRedQueue(RedConfig config, RngStream rng);

  EnqueueOutcome enqueue(const Packet& p, SimTime now) override;
  std::optional<Packet> dequeue() override;
  std::size_t occupancy() const override { return buffer_.size(); }
  std::size_t limit() const override { return config_.limit; }

  // EWMA step run on every arrival before the drop decision.
  void update_average(Color arriving);
  // Average consulted for a packet of the given color.
  double average(Color c) const;
  // Drop probability a packet of color c would see right now.
  double drop_probability(Color c) const;

  std::size_t occupancy(Color c) const { return by_color_[index_of(c)]; }
  const RedDropStats& stats() const { return stats_; }
  const RedConfig& config() const { return config_; }

  // Test hook: pins the average(s) to a value.
  void force_average(double avg) { avg_.fill(avg); }

 private:
  std::size_t average_slot(Color c) const;
  const RedColorParams& params_for(Color c) const;
  double count_for_average(std::size_t slot) const;

  RedConfig config_;
  RngStream rng_;
  std::deque<Packet> buffer_;
  std::array<std::size_t, kColorCount> by_color_{};
  std::array<double, kColorCount> avg_{};
  std::array<std::int64_t, kColorCount> since_drop_{};
  RedDropStats stats_;
};

}  // namespace afsim
