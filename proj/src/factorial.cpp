#include "afsim/factorial.hpp"

#include <cstdio>
#include <sstream>

#include "afsim/rng.hpp"

namespace afsim {

namespace {

struct ThresholdLevel {
  const char* label;
  std::array<std::array<double, 2>, kColorCount> th;  // {min, max} per color
};

struct MaxPLevel {
  const char* label;
  std::array<double, kColorCount> p;
};

// Two-color sets have no yellow traffic; the yellow row mirrors the usual
// {20/40} band so the RED configuration stays valid.
const std::vector<ThresholdLevel> kTwoColorThresholds = {
    {"{40/60,0/10}", {{{40, 60}, {20, 40}, {0, 10}}}},
    {"{40/60,0/20}", {{{40, 60}, {20, 40}, {0, 20}}}},
    {"{40/60,0/5}", {{{40, 60}, {20, 40}, {0, 5}}}},
    {"{40/60,20/40}", {{{40, 60}, {20, 40}, {20, 40}}}},
};

// The table lists {0.5,1} twice; the repeat is taken as {0.5,0.5} so the
// six pairs are distinct and the block holds 144 runs.
const std::vector<MaxPLevel> kTwoColorMaxP = {
    {"{0.1,0.1}", {0.1, 0.1, 0.1}}, {"{0.1,0.5}", {0.1, 0.5, 0.5}}, {"{0.1,1}", {0.1, 1.0, 1.0}},
    {"{0.5,0.5}", {0.5, 0.5, 0.5}}, {"{0.5,1}", {0.5, 1.0, 1.0}},   {"{1,1}", {1.0, 1.0, 1.0}},
};

const std::vector<ThresholdLevel> kThreeColorThresholds = {
    {"{40/60,20/40,0/10}", {{{40, 60}, {20, 40}, {0, 10}}}},
    {"{40/60,20/40,0/20}", {{{40, 60}, {20, 40}, {0, 20}}}},
};

const std::vector<MaxPLevel> kThreeColorMaxP = {
    {"{0.1,0.5,1}", {0.1, 0.5, 1.0}}, {"{0.1,1,1}", {0.1, 1.0, 1.0}}, {"{0.5,0.5,1}", {0.5, 0.5, 1.0}},
    {"{0.5,1,1}", {0.5, 1.0, 1.0}},   {"{1,1,1}", {1.0, 1.0, 1.0}},
};

const std::vector<int> kBucketSizes = {1, 2, 4, 8, 16, 32};
const std::vector<std::int64_t> kYellowRates = {12'800, 128'000};

std::string kbps_label(std::int64_t bps) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", static_cast<double>(bps) / 1000.0);
  return buf;
}

template <typename T, typename F>
std::vector<std::string> labels(const std::vector<T>& items, F&& f) {
  std::vector<std::string> out;
  for (const auto& i : items) out.push_back(f(i));
  return out;
}

std::array<RedColorParams, kColorCount> red_params(const ThresholdLevel& th, const MaxPLevel& mp) {
  std::array<RedColorParams, kColorCount> out{};
  for (std::size_t c = 0; c < kColorCount; ++c) out[c] = {th.th[c][0], th.th[c][1], mp.p[c]};
  return out;
}

std::string csv_field(const std::string& s) {
  return s.find(',') == std::string::npos ? s : '"' + s + '"';
}

}  // namespace

std::string_view to_string(DesignMode m) { return m == DesignMode::TwoColor ? "two-color" : "three-color"; }

DesignMode parse_design_mode(std::string_view text) {
  if (text == "two-color" || text == "2") return DesignMode::TwoColor;
  if (text == "three-color" || text == "3") return DesignMode::ThreeColor;
  throw ConfigError("unknown design mode '" + std::string(text) + "' (expected two-color or three-color)");
}

std::size_t Design::block_size() const {
  std::size_t n = 1;
  for (std::size_t f = 1; f < factors.size(); ++f) n *= factors[f].levels.size();
  return n;
}

Design make_design(DesignMode mode) {
  Design d;
  d.mode = mode;
  const auto bucket_labels = labels(kBucketSizes, [](int b) { return std::to_string(b); });
  if (mode == DesignMode::TwoColor) {
    const std::int64_t rates[] = {12'800, 25'600, 38'400, 76'800, 102'400, 128'000, 153'600, 179'200};
    for (int i = 0; i < 8; ++i) d.blocks.push_back({rates[i], 200 * i});
    d.factors = {
        {"Green Rate", labels(d.blocks, [](const GreenRateBlock& b) { return kbps_label(b.green_rate_bps); })},
        {"Max Drop Probability", labels(kTwoColorMaxP, [](const MaxPLevel& l) { return std::string(l.label); })},
        {"Drop Thresholds", labels(kTwoColorThresholds, [](const ThresholdLevel& l) { return std::string(l.label); })},
        {"Green Bucket Size", bucket_labels},
    };
  } else {
    const std::int64_t rates[] = {12'800, 25'600, 38'400, 76'800};
    for (int i = 0; i < 4; ++i) d.blocks.push_back({rates[i], 1000 * i});
    d.factors = {
        {"Green Rate", labels(d.blocks, [](const GreenRateBlock& b) { return kbps_label(b.green_rate_bps); })},
        {"Max Drop Probability", labels(kThreeColorMaxP, [](const MaxPLevel& l) { return std::string(l.label); })},
        {"Drop Thresholds",
         labels(kThreeColorThresholds, [](const ThresholdLevel& l) { return std::string(l.label); })},
        {"Yellow Rate", labels(kYellowRates, kbps_label)},
        {"Green Bucket Size", bucket_labels},
        {"Yellow Bucket Size", bucket_labels},
    };
  }
  return d;
}

int simulation_id(const Design& design, std::size_t block, std::size_t within_block) {
  return design.blocks.at(block).id_base + static_cast<int>(within_block) + 1;
}

std::uint64_t run_seed(std::uint64_t master_seed, int simulation_id) {
  return splitmix64(master_seed ^ splitmix64(static_cast<std::uint64_t>(simulation_id)));
}

std::vector<RunSpec> enumerate_design(DesignMode mode, std::uint64_t master_seed) {
  const Design d = make_design(mode);
  std::vector<RunSpec> runs;
  runs.reserve(d.run_count());
  for (std::size_t b = 0; b < d.blocks.size(); ++b) {
    std::size_t within = 0;
    auto push = [&](RunSpec r) {
      r.simulation_id = simulation_id(d, b, within++);
      r.mode = mode;
      r.green_rate_bps = d.blocks[b].green_rate_bps;
      r.seed = run_seed(master_seed, r.simulation_id);
      r.levels.insert(r.levels.begin(), b);
      runs.push_back(std::move(r));
    };
    if (mode == DesignMode::TwoColor) {
      // Levels are stored in factor order: max_p, thresholds, green bucket.
      for (std::size_t t = 0; t < kTwoColorThresholds.size(); ++t) {
        for (std::size_t m = 0; m < kTwoColorMaxP.size(); ++m) {
          for (std::size_t g = 0; g < kBucketSizes.size(); ++g) {
            RunSpec r;
            r.green_bucket = kBucketSizes[g];
            r.red = red_params(kTwoColorThresholds[t], kTwoColorMaxP[m]);
            r.levels = {m, t, g};
            push(std::move(r));
          }
        }
      }
    } else {
      // Factor order: max_p, thresholds, yellow rate, green bucket, yellow bucket.
      for (std::size_t t = 0; t < kThreeColorThresholds.size(); ++t) {
        for (std::size_t m = 0; m < kThreeColorMaxP.size(); ++m) {
          for (std::size_t y = 0; y < kYellowRates.size(); ++y) {
            for (std::size_t yb = 0; yb < kBucketSizes.size(); ++yb) {
              for (std::size_t g = 0; g < kBucketSizes.size(); ++g) {
                RunSpec r;
                r.green_bucket = kBucketSizes[g];
                r.yellow_rate_bps = kYellowRates[y];
                r.yellow_bucket = kBucketSizes[yb];
                r.red = red_params(kThreeColorThresholds[t], kThreeColorMaxP[m]);
                r.levels = {m, t, y, g, yb};
                push(std::move(r));
              }
            }
          }
        }
      }
    }
  }
  return runs;
}

ScenarioConfig build_scenario(const RunSpec& run) {
  ReferenceSetup setup;
  setup.green_rate_bps = run.green_rate_bps;
  setup.green_bucket_packets = run.green_bucket;
  setup.yellow_rate_bps = run.mode == DesignMode::ThreeColor ? run.yellow_rate_bps : 0;
  setup.yellow_bucket_packets = run.mode == DesignMode::ThreeColor ? run.yellow_bucket : 0;
  setup.green = run.red[index_of(Color::Green)];
  setup.yellow = run.red[index_of(Color::Yellow)];
  setup.red = run.red[index_of(Color::Red)];
  ScenarioConfig cfg = reference_scenario(setup);
  cfg.seed = run.seed;
  return cfg;
}

std::string design_csv(const Design& design, const std::vector<RunSpec>& runs) {
  std::ostringstream out;
  out << "simulation_id";
  for (const Factor& f : design.factors) out << ',' << csv_field(f.name);
  out << ",seed\n";
  for (const RunSpec& r : runs) {
    out << r.simulation_id;
    for (std::size_t f = 0; f < design.factors.size(); ++f) out << ',' << csv_field(design.factors[f].levels.at(r.levels.at(f)));
    out << ',' << r.seed << '\n';
  }
  return out.str();
}

}  // namespace afsim
