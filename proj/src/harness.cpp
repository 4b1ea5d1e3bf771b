#include "afsim/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "afsim/rng.hpp"

namespace afsim {

namespace {

const char* kResultsHeader =
    "simulation_id,row,customer,traffic,green_rate_bps,green_bytes,yellow_bytes,red_bytes,utilization,excess_bps,"
    "fairness,red_drops_green,red_drops_yellow,red_drops_red";

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (char ch : line) {
    if (ch == '"') {
      quoted = !quoted;
    } else if (ch == sep && !quoted) {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return std::nan("");
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

std::vector<ResultRow> result_rows(int simulation_id, const ScenarioConfig& config, const SimulationResult& result,
                                   std::vector<std::string>* warnings) {
  std::vector<ResultRow> rows;
  std::vector<double> excess;
  std::vector<double> tcp_util;
  ResultRow total;
  total.simulation_id = simulation_id;
  total.summary = true;
  total.traffic = "all";
  total.excess_bps = 0.0;
  auto warn = [&](const std::string& w) {
    if (warnings) warnings->push_back(w);
  };
  for (std::size_t i = 0; i < result.customers.size(); ++i) {
    const CustomerStats& s = result.customers[i];
    const CustomerConfig& c = config.customers.at(i);
    ResultRow row;
    row.simulation_id = simulation_id;
    row.customer = s.customer_id;
    row.traffic = c.traffic == TrafficType::Tcp ? "tcp" : "udp";
    row.green_rate_bps = c.profile.green_rate_bps;
    row.delivered_bytes = s.delivered_bytes;
    row.red_drops = result.red_drops.at(i);
    try {
      row.utilization = reserved_rate_utilization(s, static_cast<double>(c.profile.green_rate_bps));
    } catch (const MetricError& e) {
      row.utilization = std::nan("");
      warn(e.what());
    }
    try {
      row.excess_bps = excess_throughput(s);
    } catch (const MetricError& e) {
      row.excess_bps = 0.0;
      warn(std::string("excess throughput: ") + e.what());
    }
    row.fairness = std::nan("");
    excess.push_back(row.excess_bps);
    if (c.traffic == TrafficType::Tcp) tcp_util.push_back(row.utilization);
    for (std::size_t k = 0; k < kColorCount; ++k) {
      total.delivered_bytes[k] += row.delivered_bytes[k];
      total.red_drops[k] += row.red_drops[k];
    }
    total.excess_bps += row.excess_bps;
    rows.push_back(row);
  }
  total.utilization = mean_of(tcp_util);
  total.fairness = excess.empty() ? 0.0 : fairness_index(excess);
  rows.push_back(total);
  return rows;
}

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << kResultsHeader << '\n';
  for (const ResultRow& r : rows) {
    out << r.simulation_id << ',' << (r.summary ? "summary" : "customer") << ',' << r.customer << ',' << r.traffic
        << ',' << r.green_rate_bps;
    for (auto b : r.delivered_bytes) out << ',' << b;
    out << ',' << fmt(r.utilization) << ',' << fmt(r.excess_bps) << ',' << fmt(r.fairness);
    for (auto d : r.red_drops) out << ',' << d;
    out << '\n';
  }
}

std::vector<ResultRow> read_results_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || split(line, ',') != split(kResultsHeader, ',')) {
    throw std::runtime_error("results file does not start with the expected header");
  }
  std::vector<ResultRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 14) throw std::runtime_error("results line " + std::to_string(lineno) + ": expected 14 fields");
    try {
      ResultRow r;
      r.simulation_id = std::stoi(f[0]);
      r.summary = f[1] == "summary";
      r.customer = std::stoi(f[2]);
      r.traffic = f[3];
      r.green_rate_bps = std::stoll(f[4]);
      for (std::size_t k = 0; k < kColorCount; ++k) r.delivered_bytes[k] = std::stoull(f[5 + k]);
      r.utilization = std::stod(f[8]);
      r.excess_bps = std::stod(f[9]);
      r.fairness = std::stod(f[10]);
      for (std::size_t k = 0; k < kColorCount; ++k) r.red_drops[k] = std::stoull(f[11 + k]);
      rows.push_back(std::move(r));
    } catch (const std::logic_error&) {
      throw std::runtime_error("results line " + std::to_string(lineno) + ": malformed field");
    }
  }
  return rows;
}

std::map<int, RunMetrics> summarize(const std::vector<ResultRow>& rows) {
  std::map<int, RunMetrics> out;
  std::map<int, std::vector<double>> tcp_util, udp_util, tcp_excess;
  for (const ResultRow& r : rows) {
    RunMetrics& m = out[r.simulation_id];
    m.simulation_id = r.simulation_id;
    if (r.summary) {
      m.fairness = r.fairness;
      m.total_excess_bps = r.excess_bps;
      continue;
    }
    m.utilizations.push_back(r.utilization);
    if (r.traffic == "udp") {
      udp_util[r.simulation_id].push_back(r.utilization);
      m.udp_excess_bps += r.excess_bps;
    } else {
      tcp_util[r.simulation_id].push_back(r.utilization);
      tcp_excess[r.simulation_id].push_back(r.excess_bps);
    }
  }
  for (auto& [id, m] : out) {
    m.tcp_utilization = mean_of(tcp_util[id]);
    m.udp_utilization = mean_of(udp_util[id]);
    m.tcp_mean_excess_bps = mean_of(tcp_excess[id]);
  }
  return out;
}

Response parse_response(const std::string& name) {
  if (name == "fairness") return Response::Fairness;
  if (name == "tcp-utilization") return Response::TcpUtilization;
  if (name == "udp-utilization") return Response::UdpUtilization;
  throw ConfigError("unknown response '" + name + "' (expected fairness, tcp-utilization or udp-utilization)");
}

std::string to_string(Response r) {
  switch (r) {
    case Response::Fairness: return "fairness";
    case Response::TcpUtilization: return "tcp-utilization";
    case Response::UdpUtilization: return "udp-utilization";
  }
  return "?";
}

ResponseTable response_table(DesignMode mode, const std::map<int, RunMetrics>& metrics, Response response) {
  const Design design = make_design(mode);
  std::vector<FactorSchema> schema;
  for (const Factor& f : design.factors) schema.push_back({f.name, f.levels});
  ResponseTable table(schema, to_string(response));
  std::vector<int> missing;
  for (const RunSpec& run : enumerate_design(mode)) {
    auto it = metrics.find(run.simulation_id);
    if (it == metrics.end()) {
      missing.push_back(run.simulation_id);
      continue;
    }
    const RunMetrics& m = it->second;
    const double v = response == Response::Fairness         ? m.fairness
                     : response == Response::TcpUtilization ? m.tcp_utilization
                                                            : m.udp_utilization;
    table.add(run.levels, v);
  }
  if (!missing.empty()) {
    std::ostringstream msg;
    msg << missing.size() << " design runs have no results:";
    const std::size_t shown = std::min<std::size_t>(missing.size(), 50);
    for (std::size_t i = 0; i < shown; ++i) msg << ' ' << missing[i];
    if (shown < missing.size()) msg << " ...";
    throw IncompleteResults(msg.str(), missing);
  }
  return table;
}

std::vector<RunRecord> execute_design(const DesignOptions& options) {
  const std::vector<RunSpec> runs = enumerate_design(options.mode, options.master_seed);
  std::vector<RunRecord> records(runs.size());
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex progress_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < runs.size(); i = next++) {
      RunRecord& rec = records[i];
      rec.spec = runs[i];
      try {
        const ScenarioConfig cfg = build_scenario(rec.spec);
        rec.rows = result_rows(rec.spec.simulation_id, cfg, simulate(cfg));
      } catch (const std::exception& e) {
        rec.error = e.what();
      }
      const std::size_t d = ++done;
      if (options.progress) {
        std::lock_guard lock(progress_mutex);
        options.progress(d, runs.size());
      }
    }
  };
  unsigned jobs = options.jobs == 0 ? std::max(1u, std::thread::hardware_concurrency()) : options.jobs;
  jobs = std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(runs.size(), 1)));
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return records;
}

std::uint64_t design_hash(DesignMode mode, std::uint64_t master_seed) {
  return fnv1a64(design_csv(make_design(mode), enumerate_design(mode, master_seed)));
}

namespace {

std::string hex(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << content;
}

}  // namespace

int write_design_outputs(const std::filesystem::path& dir, const DesignOptions& options,
                         const std::vector<RunRecord>& records) {
  std::filesystem::create_directories(dir);
  const Design design = make_design(options.mode);
  std::vector<RunSpec> specs;
  std::vector<ResultRow> rows;
  std::vector<int> failed;
  for (const RunRecord& r : records) {
    specs.push_back(r.spec);
    if (!r.error.empty()) {
      failed.push_back(r.spec.simulation_id);
      continue;
    }
    rows.insert(rows.end(), r.rows.begin(), r.rows.end());
  }
  std::sort(specs.begin(), specs.end(), [](const RunSpec& a, const RunSpec& b) { return a.simulation_id < b.simulation_id; });
  std::stable_sort(rows.begin(), rows.end(),
                   [](const ResultRow& a, const ResultRow& b) { return a.simulation_id < b.simulation_id; });
  write_file(dir / "design.csv", design_csv(design, specs));
  std::ostringstream results;
  write_results_csv(results, rows);
  write_file(dir / "results.csv", results.str());

  std::ostringstream manifest;
  manifest << "tool_version=" << kToolVersion << '\n'
           << "mode=" << to_string(options.mode) << '\n'
           << "master_seed=" << options.master_seed << '\n'
           << "design_hash=" << hex(design_hash(options.mode, options.master_seed)) << '\n'
           << "runs=" << records.size() << '\n'
           << "failed=";
  for (std::size_t i = 0; i < failed.size(); ++i) manifest << (i ? "," : "") << failed[i];
  manifest << '\n';
  write_file(dir / "manifest.txt", manifest.str());

  if (!failed.empty()) {
    std::ofstream errors(dir / "errors.txt");
    for (const RunRecord& r : records) {
      if (!r.error.empty()) errors << r.spec.simulation_id << ": " << r.error << '\n';
    }
    return kExitRunFailure;
  }
  return kExitOk;
}

Manifest read_manifest(const std::filesystem::path& dir) {
  std::ifstream in(dir / "manifest.txt");
  if (!in) throw IncompleteResults("no manifest.txt in " + dir.string(), {});
  Manifest m;
  std::string line;
  bool have_mode = false;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    if (key == "tool_version") m.tool_version = value;
    if (key == "mode") {
      m.mode = parse_design_mode(value);
      have_mode = true;
    }
    if (key == "master_seed") m.master_seed = std::stoull(value);
    if (key == "design_hash") m.design_hash = value;
    if (key == "runs") m.runs = std::stoull(value);
    if (key == "failed") {
      for (const auto& id : split(value, ',')) {
        if (!id.empty()) m.failed.push_back(std::stoi(id));
      }
    }
  }
  if (!have_mode) throw ConfigError("manifest in " + dir.string() + " does not name a design mode");
  return m;
}

std::string write_report(const std::filesystem::path& dir, Response response) {
  const Manifest manifest = read_manifest(dir);
  std::ifstream in(dir / "results.csv");
  if (!in) throw IncompleteResults("no results.csv in " + dir.string(), {});
  const auto metrics = summarize(read_results_csv(in));
  const ResponseTable table = response_table(manifest.mode, metrics, response);

  std::ostringstream fairness;
  fairness << "simulation_id,fairness\n";
  std::ostringstream util;
  util << "simulation_id,tcp_utilization,udp_utilization\n";
  for (const auto& [id, m] : metrics) {
    fairness << id << ',' << fmt(m.fairness) << '\n';
    util << id << ',' << fmt(m.tcp_utilization) << ',' << fmt(m.udp_utilization) << '\n';
  }
  write_file(dir / "fairness_vs_id.csv", fairness.str());
  write_file(dir / "utilization_vs_id.csv", util.str());

  const AnovaReport report = allocate_variation(table);
  const std::string name = to_string(response);
  write_file(dir / ("anova_" + name + ".csv"), report.to_csv());
  const std::string text = report.to_text();
  write_file(dir / ("anova_" + name + ".txt"), text);
  return text;
}

std::uint64_t resolve_master_seed(const std::string& flag_value) {
  auto parse = [](const std::string& v, const char* origin) {
    try {
      std::size_t pos = 0;
      const auto s = std::stoull(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return static_cast<std::uint64_t>(s);
    } catch (const std::logic_error&) {
      throw ConfigError(std::string(origin) + ": '" + v + "' is not an unsigned integer seed");
    }
  };
  if (!flag_value.empty()) return parse(flag_value, "--seed");
  if (const char* env = std::getenv(kSeedEnvVar); env && *env) return parse(env, kSeedEnvVar);
  return 1;
}

}  // namespace afsim
