#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "afsim/anova.hpp"
#include "afsim/factorial.hpp"
#include "afsim/scenario.hpp"
#include "afsim/topology.hpp"

namespace afsim {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kSeedEnvVar = "AFSIM_SEED";

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitRunFailure = 2, kExitIncomplete = 3 };

class IncompleteResults : public std::runtime_error {
 public:
  IncompleteResults(const std::string& what, std::vector<int> missing)
      : std::runtime_error(what), missing_(std::move(missing)) {}
  const std::vector<int>& missing() const { return missing_; }

 private:
  std::vector<int> missing_;
};

// Key/value text with [general], [links], [red], [customers] and optional
// [customer.N] sections. Throws ConfigError listing offending fields.
ScenarioConfig parse_config(std::istream& in);
ScenarioConfig load_config(const std::filesystem::path& path);

// One line of results.csv: a customer row, or the per-run summary row
// (customer 0) holding the fairness index and mean TCP utilization.
struct ResultRow {
  int simulation_id = 0;
  bool summary = false;
  int customer = 0;
  std::string traffic;  // tcp, udp, all
  std::int64_t green_rate_bps = 0;
  std::array<std::uint64_t, kColorCount> delivered_bytes{};
  double utilization = 0.0;  // NaN when undefined
  double excess_bps = 0.0;
  double fairness = 0.0;
  std::array<std::uint64_t, kColorCount> red_drops{};
};

std::vector<ResultRow> result_rows(int simulation_id, const ScenarioConfig& config, const SimulationResult& result,
                                   std::vector<std::string>* warnings = nullptr);

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows);
std::vector<ResultRow> read_results_csv(std::istream& in);

// Per-run aggregates used as ANOVA responses and figure data.
struct RunMetrics {
  int simulation_id = 0;
  double fairness = 0.0;
  double tcp_utilization = 0.0;  // mean over TCP customers
  double udp_utilization = 0.0;  // mean over UDP customers
  double udp_excess_bps = 0.0;
  double tcp_mean_excess_bps = 0.0;
  double total_excess_bps = 0.0;
  std::vector<double> utilizations;  // per customer, in customer order
};

std::map<int, RunMetrics> summarize(const std::vector<ResultRow>& rows);

enum class Response { Fairness, TcpUtilization, UdpUtilization };
Response parse_response(const std::string& name);
std::string to_string(Response r);

// Throws IncompleteResults when any design run is absent.
ResponseTable response_table(DesignMode mode, const std::map<int, RunMetrics>& metrics, Response response);

struct RunRecord {
  RunSpec spec;
  std::vector<ResultRow> rows;
  std::string error;  // empty on success
};

struct DesignOptions {
  DesignMode mode = DesignMode::TwoColor;
  std::uint64_t master_seed = 1;
  unsigned jobs = 0;  // 0: one per hardware thread
  std::function<void(std::size_t done, std::size_t total)> progress;
};

// Runs every design point on a worker pool. Records come back ordered by
// simulation id whatever the completion order.
std::vector<RunRecord> execute_design(const DesignOptions& options);

std::uint64_t design_hash(DesignMode mode, std::uint64_t master_seed);

// Writes design.csv, results.csv and manifest.txt; returns an exit code.
int write_design_outputs(const std::filesystem::path& dir, const DesignOptions& options,
                         const std::vector<RunRecord>& records);

struct Manifest {
  std::string tool_version;
  DesignMode mode = DesignMode::TwoColor;
  std::uint64_t master_seed = 0;
  std::string design_hash;
  std::size_t runs = 0;
  std::vector<int> failed;
};
Manifest read_manifest(const std::filesystem::path& dir);

// Regenerates figure data and the ANOVA report for one response from the
// persisted results. Returns the report text.
std::string write_report(const std::filesystem::path& dir, Response response);

// Master seed: explicit flag, else the environment, else 1.
std::uint64_t resolve_master_seed(const std::string& flag_value);

}  // namespace afsim
