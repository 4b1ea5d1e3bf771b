#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "afsim/red_queue.hpp"
#include "afsim/scenario.hpp"

namespace afsim {

enum class DesignMode : std::uint8_t { TwoColor, ThreeColor };

std::string_view to_string(DesignMode m);
DesignMode parse_design_mode(std::string_view text);

struct Factor {
  std::string name;
  std::vector<std::string> levels;
};

struct GreenRateBlock {
  std::int64_t green_rate_bps = 0;
  int id_base = 0;
};

// Full factorial over the green-rate blocks and the per-block factors.
struct Design {
  DesignMode mode = DesignMode::TwoColor;
  std::vector<GreenRateBlock> blocks;
  // Green rate first, then the per-block factors in table order.
  std::vector<Factor> factors;

  std::size_t block_size() const;
  std::size_t run_count() const { return blocks.size() * block_size(); }
};

Design make_design(DesignMode mode);

struct RunSpec {
  int simulation_id = 0;
  DesignMode mode = DesignMode::TwoColor;
  std::int64_t green_rate_bps = 0;
  int green_bucket = 0;  // packets
  std::int64_t yellow_rate_bps = 0;
  int yellow_bucket = 0;  // packets, three-color only
  std::array<RedColorParams, kColorCount> red{};  // per color thresholds and max_p
  std::uint64_t seed = 0;
  std::vector<std::size_t> levels;  // one index per Design::factors entry
};

// Stable enumeration ordered by simulation id.
std::vector<RunSpec> enumerate_design(DesignMode mode, std::uint64_t master_seed = 1);

// id = block base + within-block index + 1.
int simulation_id(const Design& design, std::size_t block, std::size_t within_block);

std::uint64_t run_seed(std::uint64_t master_seed, int simulation_id);

ScenarioConfig build_scenario(const RunSpec& run);

// Audit export: simulation id plus one column per factor level.
std::string design_csv(const Design& design, const std::vector<RunSpec>& runs);

}  // namespace afsim
