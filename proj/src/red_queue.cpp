#include "afsim/red_queue.hpp"

#include <cmath>
#include <sstream>

namespace afsim {

std::string_view to_string(RedPolicy p) {
  switch (p) {
    case RedPolicy::SAST: return "SAST";
    case RedPolicy::SAMT: return "SAMT";
    case RedPolicy::MAST: return "MAST";
    case RedPolicy::MAMT: return "MAMT";
  }
  return "?";
}

RedPolicy parse_red_policy(std::string_view text) {
  if (text == "SAST" || text == "sast") return RedPolicy::SAST;
  if (text == "SAMT" || text == "samt") return RedPolicy::SAMT;
  if (text == "MAST" || text == "mast") return RedPolicy::MAST;
  if (text == "MAMT" || text == "mamt") return RedPolicy::MAMT;
  throw ConfigError("unknown RED accounting mode '" + std::string(text) + "' (expected SAST, SAMT, MAST or MAMT)");
}

MultiAverageScheme parse_average_scheme(std::string_view text) {
  if (text == "same-or-better") return MultiAverageScheme::SameOrBetter;
  if (text == "per-color") return MultiAverageScheme::PerColor;
  throw ConfigError("unknown average scheme '" + std::string(text) + "' (expected same-or-better or per-color)");
}

Accounting accounting_of(RedPolicy p) {
  return (p == RedPolicy::SAST || p == RedPolicy::SAMT) ? Accounting::Single : Accounting::Multiple;
}

double red_drop_prob(double avg, const RedColorParams& params) {
  if (avg <= params.min_th) return 0.0;
  if (avg >= params.max_th) return 1.0;
  return params.max_p * (avg - params.min_th) / (params.max_th - params.min_th);
}

namespace {

bool shared_params(const std::array<RedColorParams, kColorCount>& params) {
  return params[0] == params[1] && params[1] == params[2];
}

bool single_threshold(RedPolicy p) { return p == RedPolicy::SAST || p == RedPolicy::MAST; }

}  // namespace

RedPolicy classify_policy(Accounting accounting, const std::array<RedColorParams, kColorCount>& params) {
  const bool shared = shared_params(params);
  if (accounting == Accounting::Single) return shared ? RedPolicy::SAST : RedPolicy::SAMT;
  return shared ? RedPolicy::MAST : RedPolicy::MAMT;
}

void validate(const RedConfig& config) {
  std::ostringstream problems;
  if (config.limit == 0) problems << " limit must be positive;";
  if (!(config.weight > 0.0 && config.weight <= 1.0)) problems << " weight must lie in (0,1];";
  for (Color c : kAllColors) {
    const RedColorParams& p = config.params[index_of(c)];
    const std::string name(to_string(c));
    if (!(p.min_th >= 0.0)) problems << " " << name << ".min_th must be >= 0;";
    if (!(p.min_th < p.max_th)) problems << " " << name << ".min_th must be < max_th;";
    if (p.max_th > static_cast<double>(config.limit)) problems << " " << name << ".max_th exceeds queue limit;";
    if (!(p.max_p > 0.0 && p.max_p <= 1.0)) problems << " " << name << ".max_p must lie in (0,1];";
  }
  if (single_threshold(config.policy) && !shared_params(config.params)) {
    problems << " " << to_string(config.policy) << " requires identical parameters for all colors;";
  }
  const std::string text = problems.str();
  if (!text.empty()) throw ConfigError("invalid RED configuration:" + text);
}

MultiColorRedQueue::MultiColorRedQueue(RedConfig config, RngStream rng) : config_(config), rng_(std::move(rng)) {
  validate(config_);
}

std::size_t MultiColorRedQueue::average_slot(Color c) const {
  return accounting_of(config_.policy) == Accounting::Single ? 0 : index_of(c);
}

const RedColorParams& MultiColorRedQueue::params_for(Color c) const {
  return single_threshold(config_.policy) ? config_.params[0] : config_.params[index_of(c)];
}

double MultiColorRedQueue::count_for_average(std::size_t slot) const {
  if (accounting_of(config_.policy) == Accounting::Single) return static_cast<double>(buffer_.size());
  if (config_.scheme == MultiAverageScheme::PerColor) return static_cast<double>(by_color_[slot]);
  std::size_t n = 0;
  for (std::size_t k = 0; k <= slot; ++k) n += by_color_[k];
  return static_cast<double>(n);
}

void MultiColorRedQueue::update_average(Color arriving) {
  const double w = config_.weight;
  if (accounting_of(config_.policy) == Accounting::Single) {
    avg_[0] = (1.0 - w) * avg_[0] + w * count_for_average(0);
    return;
  }
  // A color's average moves on arrivals that its count includes.
  const std::size_t a = index_of(arriving);
  for (std::size_t k = 0; k < kColorCount; ++k) {
    const bool included = config_.scheme == MultiAverageScheme::SameOrBetter ? a <= k : a == k;
    if (included) avg_[k] = (1.0 - w) * avg_[k] + w * count_for_average(k);
  }
}

double MultiColorRedQueue::average(Color c) const { return avg_[average_slot(c)]; }

double MultiColorRedQueue::drop_probability(Color c) const {
  return red_drop_prob(average(c), params_for(c));
}

EnqueueOutcome MultiColorRedQueue::enqueue(const Packet& p, SimTime) {
  update_average(p.color);
  const std::size_t ci = index_of(p.color);
  const std::size_t slot = average_slot(p.color);
  double prob = drop_probability(p.color);
  if (prob > 0.0 && prob < 1.0 && config_.count_adjusted) {
    const double count = static_cast<double>(since_drop_[slot]);
    prob = count * prob < 1.0 ? prob / (1.0 - count * prob) : 1.0;
  }
  bool early = false;
  if (prob >= 1.0) {
    early = true;
  } else if (prob > 0.0) {
    early = rng_.uniform() < prob;
  }
  if (prob > 0.0) {
    since_drop_[slot] = early ? 0 : since_drop_[slot] + 1;
  } else {
    since_drop_[slot] = 0;
  }
  if (early) {
    ++stats_.early[ci];
    return EnqueueOutcome::EarlyDrop;
  }
  if (buffer_.size() >= config_.limit) {
    ++stats_.overflow[ci];
    return EnqueueOutcome::OverflowDrop;
  }
  buffer_.push_back(p);
  ++by_color_[ci];
  ++stats_.accepted[ci];
  return EnqueueOutcome::Accepted;
}

std::optional<Packet> MultiColorRedQueue::dequeue() {
  if (buffer_.empty()) return std::nullopt;
  Packet p = buffer_.front();
  buffer_.pop_front();
  --by_color_[index_of(p.color)];
  return p;
}

}  // namespace afsim
