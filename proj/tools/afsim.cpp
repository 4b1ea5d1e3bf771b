// Batch driver: single scenario runs, full factorial designs, ANOVA reports.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "afsim/harness.hpp"

using namespace afsim;

namespace {

int cmd_run(const std::string& config_path, const std::string& out_path, const std::string& seed) {
  ScenarioConfig cfg;
  try {
    cfg = load_config(config_path);
    if (!seed.empty()) cfg.seed = resolve_master_seed(seed);
  } catch (const ConfigError& e) {
    std::cerr << "afsim run: " << e.what() << '\n';
    return kExitConfig;
  }
  SimulationResult result;
  try {
    result = simulate(cfg);
  } catch (const std::exception& e) {
    std::cerr << "afsim run: simulation failed: " << e.what() << '\n';
    return kExitRunFailure;
  }
  std::vector<std::string> warnings;
  const auto rows = result_rows(1, cfg, result, &warnings);
  for (const auto& w : warnings) std::cerr << "afsim run: warning: " << w << '\n';
  if (out_path.empty() || out_path == "-") {
    write_results_csv(std::cout, rows);
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      std::cerr << "afsim run: cannot write " << out_path << '\n';
      return kExitRunFailure;
    }
    write_results_csv(out, rows);
  }
  std::cerr << "afsim run: " << result.summary.events_dispatched << " events, clock "
            << result.summary.final_clock.to_string() << '\n';
  return kExitOk;
}

int cmd_design(const std::string& mode_name, const std::string& out_dir, unsigned jobs, const std::string& seed,
               bool dry_run) {
  DesignOptions opts;
  try {
    opts.mode = parse_design_mode(mode_name);
    opts.master_seed = resolve_master_seed(seed);
  } catch (const ConfigError& e) {
    std::cerr << "afsim design: " << e.what() << '\n';
    return kExitConfig;
  }
  opts.jobs = jobs;
  if (dry_run) {
    std::filesystem::create_directories(out_dir);
    std::ofstream(std::filesystem::path(out_dir) / "design.csv")
        << design_csv(make_design(opts.mode), enumerate_design(opts.mode, opts.master_seed));
    return kExitOk;
  }
  opts.progress = [](std::size_t done, std::size_t total) {
    if (done % 50 == 0 || done == total) std::fprintf(stderr, "\rafsim design: %zu/%zu runs", done, total);
    if (done == total) std::fputc('\n', stderr);
  };
  const auto records = execute_design(opts);
  try {
    const int code = write_design_outputs(out_dir, opts, records);
    if (code != kExitOk) std::cerr << "afsim design: some runs failed, see errors.txt\n";
    return code;
  } catch (const std::exception& e) {
    std::cerr << "afsim design: " << e.what() << '\n';
    return kExitRunFailure;
  }
}

int cmd_report(const std::string& dir, const std::vector<std::string>& responses) {
  try {
    for (const auto& name : responses) std::cout << write_report(dir, parse_response(name)) << '\n';
  } catch (const ConfigError& e) {
    std::cerr << "afsim report: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IncompleteResults& e) {
    std::cerr << "afsim report: " << e.what() << '\n';
    return kExitIncomplete;
  } catch (const std::exception& e) {
    std::cerr << "afsim report: " << e.what() << '\n';
    return kExitIncomplete;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Assured Forwarding over a GEO satellite bottleneck: simulator and experiment harness"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  std::string config_path, out, seed, mode, report_dir;
  unsigned jobs = 0;
  bool dry_run = false;
  std::vector<std::string> responses{"fairness", "tcp-utilization", "udp-utilization"};

  auto* run = app.add_subcommand("run", "Run one scenario from a configuration file");
  run->add_option("--config", config_path, "Scenario configuration file")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out, "Results CSV (default: stdout)");
  run->add_option("--seed", seed, "Override the scenario seed");

  auto* design = app.add_subcommand("design", "Run a full factorial design");
  design->add_option("--mode", mode, "two-color or three-color")->required();
  design->add_option("--out", out, "Output directory")->required();
  design->add_option("--jobs", jobs, "Worker threads (default: hardware threads)");
  design->add_option("--seed", seed, std::string("Master seed (default: $") + kSeedEnvVar + " or 1)");
  design->add_flag("--dry-run", dry_run, "Only write design.csv");

  auto* report = app.add_subcommand("report", "ANOVA and figure data from a design result directory");
  report->add_option("--out", report_dir, "Design result directory")->required();
  report->add_option("--response", responses, "fairness, tcp-utilization, udp-utilization");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (*run) return cmd_run(config_path, out, seed);
  if (*design) return cmd_design(mode, out, jobs, seed, dry_run);
  return cmd_report(report_dir, responses);
}
