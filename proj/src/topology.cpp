#include "afsim/topology.hpp"

#include <stdexcept>

#include "afsim/rng.hpp"

namespace afsim {

struct Topology::Customer {
  int id = 0;
  const CustomerConfig* cfg = nullptr;
  std::unique_ptr<TrafficConditioner> conditioner;
  std::vector<Link*> access_up;
  std::vector<Link*> access_down;
  Link* edge_up = nullptr;
  Link* edge_down = nullptr;
  Link* sink_down = nullptr;
  Link* sink_up = nullptr;
  std::vector<std::unique_ptr<TcpSender>> senders;
  std::vector<TcpSinkState> sinks;
  std::unique_ptr<UdpSource> udp;
  CustomerStats stats;
  std::array<std::uint64_t, kColorCount> red_drops{};
};

Topology::~Topology() = default;

Link& Topology::add_link(std::string name, const LinkSpec& spec, std::unique_ptr<PacketQueue> q) {
  if (!q) q = std::make_unique<DropTailQueue>(spec.queue_limit);
  links_.push_back(std::make_unique<Link>(sim_, std::move(name), LinkParams{spec.bandwidth_bps, spec.delay}, std::move(q)));
  return *links_.back();
}

Topology::Customer& Topology::customer(int id) {
  if (id < 1 || static_cast<std::size_t>(id) > customers_.size()) {
    throw std::out_of_range("no customer " + std::to_string(id));
  }
  return *customers_[static_cast<std::size_t>(id - 1)];
}

const Topology::Customer& Topology::customer(int id) const {
  return const_cast<Topology*>(this)->customer(id);
}

Topology::Topology(Simulator& sim, const ScenarioConfig& config) : sim_(sim), config_(config) {
  validate(config_);

  auto red = std::make_unique<MultiColorRedQueue>(config_.red, RngStream(config_.seed, "red.router1"));
  red_ = red.get();
  uplink_ = &add_link("router1->router2", config_.uplink, std::move(red));
  uplink_reverse_ = &add_link("router2->router1", config_.uplink);
  downlink_ = &add_link("router2->router3", config_.downlink);
  downlink_reverse_ = &add_link("router3->router2", config_.downlink);

  UidSource uids = [this] { return next_uid_++; };

  for (std::size_t i = 0; i < config_.customers.size(); ++i) {
    auto c = std::make_unique<Customer>();
    Customer& cust = *c;
    cust.id = static_cast<int>(i + 1);
    cust.cfg = &config_.customers[i];
    cust.stats.customer_id = cust.id;
    cust.conditioner = std::make_unique<TrafficConditioner>(cust.cfg->profile);
    const std::string tag = "customer" + std::to_string(cust.id);

    cust.edge_up = &add_link(tag + "->router1", config_.edge);
    cust.edge_down = &add_link("router1->" + tag, config_.edge);
    cust.sink_down = &add_link("router3->sink" + std::to_string(cust.id), config_.sink);
    cust.sink_up = &add_link("sink" + std::to_string(cust.id) + "->router3", config_.sink);

    for (int f = 0; f < cust.cfg->flows; ++f) {
      const std::string src = tag + ".src" + std::to_string(f);
      Link& up = add_link(src + "->" + tag, config_.access);
      Link& down = add_link(tag + "->" + src, config_.access);
      cust.access_up.push_back(&up);
      cust.access_down.push_back(&down);

      // Customer edge: data is recolored before it leaves for Router1.
      up.set_receiver([this, &cust](const Packet& p) {
        Packet marked = p;
        cust.conditioner->mark(marked, sim_.now());
        cust.edge_up->send(marked);
      });

      if (cust.cfg->traffic == TrafficType::Tcp) {
        cust.senders.push_back(std::make_unique<TcpSender>(sim_, config_.tcp, cust.id, f, config_.packet_bytes, uids,
                                                           [&up](const Packet& p) { up.send(p); }));
        TcpSender* sender = cust.senders.back().get();
        down.set_receiver([sender](const Packet& ack) { sender->on_ack(ack); });
      }
    }
    cust.sinks.resize(cust.cfg->traffic == TrafficType::Tcp ? static_cast<std::size_t>(cust.cfg->flows) : 0);
    if (cust.cfg->traffic == TrafficType::Udp) {
      Link& up = *cust.access_up.front();
      cust.udp = std::make_unique<UdpSource>(sim_, config_.udp_rate_bps, cust.id, config_.packet_bytes, uids,
                                             [&up](const Packet& p) { up.send(p); });
    }

    cust.edge_up->set_receiver([this](const Packet& p) { uplink_->send(p); });
    cust.sink_down->set_receiver([this, &cust](const Packet& p) { at_sink(cust, p); });
    cust.sink_up->set_receiver([this](const Packet& p) { downlink_reverse_->send(p); });
    cust.edge_down->set_receiver([&cust](const Packet& ack) {
      cust.access_down.at(static_cast<std::size_t>(ack.flow))->send(ack);
    });
    customers_.push_back(std::move(c));
  }

  // Router2 forwards data towards Router3; Router3 and Router1 demultiplex
  // by customer.
  uplink_->set_receiver([this](const Packet& p) { downlink_->send(p); });
  downlink_->set_receiver([this](const Packet& p) { customer(p.customer).sink_down->send(p); });
  downlink_reverse_->set_receiver([this](const Packet& p) { uplink_reverse_->send(p); });
  uplink_reverse_->set_receiver([this](const Packet& p) { customer(p.customer).edge_down->send(p); });
  uplink_->set_drop_observer([this](const Packet& p, EnqueueOutcome) {
    ++customer(p.customer).red_drops[index_of(p.color)];
  });
}

void Topology::at_sink(Customer& c, const Packet& p) {
  c.stats.record(p);
  if (p.kind != PacketKind::TcpData) return;
  TcpSinkState& sink = c.sinks.at(static_cast<std::size_t>(p.flow));
  Packet ack;
  ack.uid = next_uid_++;
  ack.customer = c.id;
  ack.flow = p.flow;
  ack.kind = PacketKind::TcpAck;
  ack.size_bytes = config_.ack_bytes;
  ack.color = Color::Green;
  ack.seq = sink_on_data(sink, p.seq);
  ack.created_at = sim_.now();
  c.sink_up->send(ack);
}

void Topology::start() {
  RngStream jitter(config_.seed, "tcp.start");
  for (auto& c : customers_) {
    if (c->udp) c->udp->start(sim_.now());
    for (auto& sender : c->senders) {
      TcpSender* s = sender.get();
      const SimTime at = sim_.now() + SimTime::from_seconds(jitter.uniform() * config_.tcp_start_spread.seconds());
      sim_.schedule(at, [s] { s->start(); });
    }
  }
}

const CustomerStats& Topology::stats(int id) const { return customer(id).stats; }
const TrafficConditioner& Topology::conditioner(int id) const { return *customer(id).conditioner; }
const TcpSender& Topology::tcp_sender(int id, int flow) const {
  return *customer(id).senders.at(static_cast<std::size_t>(flow));
}
const TcpSinkState& Topology::tcp_sink(int id, int flow) const {
  return customer(id).sinks.at(static_cast<std::size_t>(flow));
}
const UdpSource& Topology::udp_source(int id) const {
  const auto& c = customer(id);
  if (!c.udp) throw std::out_of_range("customer " + std::to_string(id) + " has no UDP source");
  return *c.udp;
}
const std::array<std::uint64_t, kColorCount>& Topology::red_drops(int id) const { return customer(id).red_drops; }

std::vector<const Link*> Topology::links() const {
  std::vector<const Link*> out;
  out.reserve(links_.size());
  for (const auto& l : links_) out.push_back(l.get());
  return out;
}

SimTime Topology::propagation_to_router3() const {
  return config_.access.delay + config_.edge.delay + config_.uplink.delay + config_.downlink.delay;
}

SimTime Topology::propagation_to_sink() const { return propagation_to_router3() + config_.sink.delay; }

SimulationResult simulate(const ScenarioConfig& config) {
  Simulator sim;
  Topology topo(sim, config);
  SimulationResult result;
  std::uint64_t digest = 0x84222325cbf29ce4ULL;
  sim.set_trace([&digest](SimTime t, std::uint64_t seq) {
    digest = splitmix64(digest ^ static_cast<std::uint64_t>(t.ns())) + seq;
  });
  topo.start();
  result.summary = sim.run(config.duration);
  result.trace_digest = digest;

  for (std::size_t i = 1; i <= topo.customer_count(); ++i) {
    CustomerStats s = topo.stats(static_cast<int>(i));
    s.duration_s = config.duration.seconds();
    result.customers.push_back(s);
    result.red_drops.push_back(topo.red_drops(static_cast<int>(i)));
  }
  result.red_stats = topo.red_queue().stats();
  for (const Link* l : topo.links()) result.links.push_back({l->name(), l->counters(), l->in_system()});
  return result;
}

}  // namespace afsim
