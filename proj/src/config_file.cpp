#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "afsim/harness.hpp"

namespace afsim {

namespace {

namespace pt = boost::property_tree;

class Reader {
 public:
  explicit Reader(const pt::ptree& root) : root_(root) {}

  // Calls `apply` with the raw text when the key is present.
  template <typename F>
  void with(const std::string& section, const std::string& key, F&& apply) {
    const auto sec = root_.get_child_optional(pt::ptree::path_type(section, '|'));
    if (!sec) return;
    const auto val = sec->get_optional<std::string>(pt::ptree::path_type(key, '|'));
    if (!val) return;
    used_.insert(section + "." + key);
    try {
      apply(trim(*val));
    } catch (const std::exception& e) {
      problems_.push_back(section + "." + key + ": " + e.what());
    }
  }

  void number(const std::string& section, const std::string& key, double& out) {
    with(section, key, [&](const std::string& v) { out = to_double(v); });
  }

  void check_unknown() {
    for (const auto& [section, body] : root_) {
      if (body.empty() && !body.data().empty()) {
        problems_.push_back(section + ": key outside of any section");
        continue;
      }
      for (const auto& [key, value] : body) {
        if (!used_.count(section + "." + key)) problems_.push_back(section + "." + key + ": unknown key");
      }
    }
  }

  void problem(std::string p) { problems_.push_back(std::move(p)); }
  const std::vector<std::string>& problems() const { return problems_; }

  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  }

  static double to_double(const std::string& v) {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size() || !std::isfinite(d)) throw std::invalid_argument("'" + v + "' is not a number");
    return d;
  }

  static std::int64_t to_int(const std::string& v) {
    const double d = to_double(v);
    if (d != std::floor(d)) throw std::invalid_argument("'" + v + "' is not an integer");
    return static_cast<std::int64_t>(d);
  }

 private:
  const pt::ptree& root_;
  std::set<std::string> used_;
  std::vector<std::string> problems_;
};

std::int64_t kbps(double v) { return std::llround(v * 1000.0); }

RedColorParams parse_color(const std::string& text) {
  // min/max/max_p
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, '/')) parts.push_back(Reader::trim(item));
  if (parts.size() != 3) throw std::invalid_argument("expected min_th/max_th/max_p, got '" + text + "'");
  return {Reader::to_double(parts[0]), Reader::to_double(parts[1]), Reader::to_double(parts[2])};
}

bool parse_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::invalid_argument("'" + v + "' is not a boolean");
}

void read_link(Reader& r, const std::string& name, LinkSpec& spec) {
  r.with("links", name + "_bandwidth_kbps", [&](const std::string& v) { spec.bandwidth_bps = kbps(Reader::to_double(v)); });
  r.with("links", name + "_delay_ms",
         [&](const std::string& v) { spec.delay = SimTime::from_seconds(Reader::to_double(v) / 1000.0); });
}

}  // namespace

ScenarioConfig parse_config(std::istream& in) {
  pt::ptree root;
  try {
    pt::read_ini(in, root);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("malformed configuration: ") + e.what());
  }
  Reader r(root);
  ScenarioConfig cfg;

  r.with("general", "duration", [&](const std::string& v) { cfg.duration = SimTime::from_seconds(Reader::to_double(v)); });
  r.with("general", "seed", [&](const std::string& v) { cfg.seed = std::stoull(v); });
  r.with("general", "packet_size", [&](const std::string& v) { cfg.packet_bytes = static_cast<std::int32_t>(Reader::to_int(v)); });
  r.with("general", "ack_size", [&](const std::string& v) { cfg.ack_bytes = static_cast<std::int32_t>(Reader::to_int(v)); });
  r.number("general", "tcp_window", cfg.tcp.max_window);
  r.with("general", "udp_rate_kbps", [&](const std::string& v) { cfg.udp_rate_bps = kbps(Reader::to_double(v)); });
  r.number("general", "rto_min", cfg.tcp.rto_min);
  r.number("general", "rto_initial", cfg.tcp.rto_initial);
  r.with("general", "tcp_start_spread",
         [&](const std::string& v) { cfg.tcp_start_spread = SimTime::from_seconds(Reader::to_double(v)); });

  read_link(r, "access", cfg.access);
  read_link(r, "edge", cfg.edge);
  read_link(r, "uplink", cfg.uplink);
  read_link(r, "downlink", cfg.downlink);
  read_link(r, "sink", cfg.sink);
  std::int64_t queue_limit = 60;
  r.with("links", "queue_limit", [&](const std::string& v) { queue_limit = Reader::to_int(v); });
  if (queue_limit <= 0) {
    r.problem("links.queue_limit: must be positive");
    queue_limit = 60;
  }
  for (LinkSpec* s : {&cfg.access, &cfg.edge, &cfg.uplink, &cfg.downlink, &cfg.sink}) {
    s->queue_limit = static_cast<std::size_t>(queue_limit);
  }

  cfg.red.limit = static_cast<std::size_t>(queue_limit);
  r.with("red", "mode", [&](const std::string& v) { cfg.red.policy = parse_red_policy(v); });
  r.number("red", "weight", cfg.red.weight);
  r.with("red", "scheme", [&](const std::string& v) { cfg.red.scheme = parse_average_scheme(v); });
  r.with("red", "count_adjusted", [&](const std::string& v) { cfg.red.count_adjusted = parse_bool(v); });
  cfg.red.params = {RedColorParams{40, 60, 0.1}, RedColorParams{20, 40, 0.5}, RedColorParams{0, 10, 1.0}};
  for (Color c : kAllColors) {
    r.with("red", std::string(to_string(c)), [&](const std::string& v) { cfg.red.params[index_of(c)] = parse_color(v); });
  }

  std::int64_t count = 10;
  std::set<std::int64_t> udp_ids{10};
  std::int64_t flows = 5;
  double green_rate = 12.8, yellow_rate = 0.0;
  std::int64_t green_bucket = 32, yellow_bucket = 0;
  r.with("customers", "count", [&](const std::string& v) { count = Reader::to_int(v); });
  r.with("customers", "udp", [&](const std::string& v) {
    udp_ids.clear();
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!Reader::trim(item).empty()) udp_ids.insert(Reader::to_int(Reader::trim(item)));
    }
  });
  r.with("customers", "tcp_flows", [&](const std::string& v) { flows = Reader::to_int(v); });
  r.number("customers", "green_rate_kbps", green_rate);
  r.with("customers", "green_bucket", [&](const std::string& v) { green_bucket = Reader::to_int(v); });
  r.number("customers", "yellow_rate_kbps", yellow_rate);
  r.with("customers", "yellow_bucket", [&](const std::string& v) { yellow_bucket = Reader::to_int(v); });

  if (count < 0 || count > 1000) {
    r.problem("customers.count: must lie in 0..1000");
    count = 0;
  }
  for (std::int64_t id = 1; id <= count; ++id) {
    CustomerConfig c;
    c.traffic = udp_ids.count(id) ? TrafficType::Udp : TrafficType::Tcp;
    c.flows = c.traffic == TrafficType::Udp ? 1 : static_cast<int>(flows);
    c.profile.green_rate_bps = kbps(green_rate);
    c.profile.green_bucket_bytes = green_bucket * cfg.packet_bytes;
    if (c.traffic == TrafficType::Tcp) {
      c.profile.yellow_rate_bps = kbps(yellow_rate);
      c.profile.yellow_bucket_bytes = yellow_bucket * cfg.packet_bytes;
    }
    const std::string sec = "customer." + std::to_string(id);
    r.with(sec, "traffic", [&](const std::string& v) {
      if (v == "tcp") {
        c.traffic = TrafficType::Tcp;
        c.flows = static_cast<int>(flows);
      } else if (v == "udp") {
        c.traffic = TrafficType::Udp;
        c.flows = 1;
      } else {
        throw std::invalid_argument("expected tcp or udp");
      }
    });
    r.with(sec, "flows", [&](const std::string& v) { c.flows = static_cast<int>(Reader::to_int(v)); });
    r.with(sec, "green_rate_kbps", [&](const std::string& v) { c.profile.green_rate_bps = kbps(Reader::to_double(v)); });
    r.with(sec, "green_bucket",
           [&](const std::string& v) { c.profile.green_bucket_bytes = Reader::to_int(v) * cfg.packet_bytes; });
    r.with(sec, "yellow_rate_kbps",
           [&](const std::string& v) { c.profile.yellow_rate_bps = kbps(Reader::to_double(v)); });
    r.with(sec, "yellow_bucket",
           [&](const std::string& v) { c.profile.yellow_bucket_bytes = Reader::to_int(v) * cfg.packet_bytes; });
    cfg.customers.push_back(c);
  }

  r.check_unknown();
  std::vector<std::string> problems = r.problems();
  for (auto& p : validation_problems(cfg)) problems.push_back(std::move(p));
  if (!problems.empty()) {
    std::ostringstream msg;
    msg << "invalid scenario:";
    for (const auto& p : problems) msg << "\n  " << p;
    throw ConfigError(msg.str());
  }
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration file " + path.string());
  return parse_config(in);
}

}  // namespace afsim
