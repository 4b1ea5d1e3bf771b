#include <vector>

#include "afsim/link.hpp"
#include "afsim/queue.hpp"
#include "afsim/topology.hpp"
#include "doctest.h"

using namespace afsim;

namespace {

Packet data(std::int64_t seq, std::int32_t bytes = kDataPacketBytes) {
  Packet p;
  p.uid = static_cast<std::uint64_t>(seq) + 1;
  p.seq = seq;
  p.size_bytes = bytes;
  return p;
}

}  // namespace

TEST_CASE("droptail accepts below the limit and drops at it") {
  DropTailQueue q(60);
  for (int i = 0; i < 59; ++i) REQUIRE(accepted(q.enqueue(data(i), {})));
  CHECK(q.occupancy() == 59);
  CHECK(q.enqueue(data(59), {}) == EnqueueOutcome::Accepted);
  CHECK(q.occupancy() == 60);
  CHECK(q.enqueue(data(60), {}) == EnqueueOutcome::OverflowDrop);
  CHECK(q.occupancy() == 60);
}

TEST_CASE("droptail is FIFO") {
  DropTailQueue q(60);
  q.enqueue(data(1), {});
  q.enqueue(data(2), {});
  CHECK(q.dequeue()->seq == 1);
  CHECK(q.dequeue()->seq == 2);
  CHECK_FALSE(q.dequeue().has_value());
}

TEST_CASE("serialization times") {
  CHECK(serialization_time(576, 1'500'000).ns() == 3'072'000);  // 576*8/1.5e6
  CHECK(serialization_time(576, 10'000'000).ns() == 460'800);   // 576*8/1e7
  CHECK(serialization_time(40, 1'500'000).ns() == 213'333);     // 40*8/1.5e6, rounded
}

TEST_CASE("transmit schedules arrival after serialization plus delay") {
  Simulator sim;
  Link access(sim, "a", {10'000'000, SimTime::from_us(1)}, std::make_unique<DropTailQueue>(60));
  Link sat(sim, "s", {1'500'000, SimTime::from_ms(125)}, std::make_unique<DropTailQueue>(60));
  std::vector<SimTime> a_times, s_times;
  access.set_receiver([&](const Packet&) { a_times.push_back(sim.now()); });
  sat.set_receiver([&](const Packet&) { s_times.push_back(sim.now()); });
  access.send(data(0));
  sat.send(data(0, kAckPacketBytes));
  sim.run(SimTime::from_seconds(1));
  REQUIRE(a_times.size() == 1);
  CHECK(a_times[0].ns() == 460'800 + 1'000);
  REQUIRE(s_times.size() == 1);
  CHECK(s_times[0].ns() == 213'333 + 125'000'000);
}

TEST_CASE("back-to-back packets leave one serialization time apart, in order") {
  Simulator sim;
  Link link(sim, "l", {1'500'000, SimTime::from_ms(125)}, std::make_unique<DropTailQueue>(60));
  std::vector<Packet> got;
  std::vector<SimTime> at;
  link.set_receiver([&](const Packet& p) {
    got.push_back(p);
    at.push_back(sim.now());
  });
  for (int i = 0; i < 10; ++i) link.send(data(i));
  CHECK(link.busy());
  sim.run(SimTime::from_seconds(1));
  REQUIRE(got.size() == 10);
  for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i].seq == static_cast<std::int64_t>(i));
  for (std::size_t i = 1; i < at.size(); ++i) CHECK((at[i] - at[i - 1]).ns() >= 3'072'000);
}

TEST_CASE("link conserves packets") {
  Simulator sim;
  Link link(sim, "l", {1'500'000, SimTime::from_ms(125)}, std::make_unique<DropTailQueue>(5));
  for (int i = 0; i < 20; ++i) link.send(data(i));
  sim.run(SimTime::from_ms(130));
  const auto& c = link.counters();
  CHECK(c.arrivals == 20);
  CHECK(c.dropped == 14);  // one on the wire, five queued
  CHECK(c.arrivals == c.delivered + c.dropped + link.in_system());
}

TEST_CASE("reference topology geometry") {
  Simulator sim;
  const ScenarioConfig cfg = reference_scenario();
  Topology topo(sim, cfg);
  CHECK(topo.customer_count() == 10);
  // 1 us + 5 us + 125 ms + 125 ms
  CHECK(topo.propagation_to_router3().ns() == 250'006'000);
  CHECK(topo.propagation_to_sink().ns() == 250'011'000);
  CHECK(topo.bottleneck().params().bandwidth_bps == 1'500'000);
  CHECK(topo.red_queue().limit() == 60);
  // 10 customers x (edge pair + sink pair) + 46 access pairs + 4 core links
  CHECK(topo.links().size() == 10 * 4 + 46 * 2 + 4);
}

TEST_CASE("zero customers is a validation error") {
  ScenarioConfig cfg = reference_scenario();
  cfg.customers.clear();
  Simulator sim;
  CHECK_THROWS_AS(Topology(sim, cfg), ConfigError);
}

TEST_CASE("malformed scenario lists offending fields") {
  ScenarioConfig cfg = reference_scenario();
  cfg.customers[2].profile.green_rate_bps = 0;
  cfg.uplink.bandwidth_bps = 0;
  const auto problems = validation_problems(cfg);
  REQUIRE(problems.size() == 2);
  CHECK(problems[0].find("links.uplink") != std::string::npos);
  CHECK(problems[1].find("customer.3.green_rate") != std::string::npos);
}

TEST_CASE("reference run: conservation, capacity and determinism") {
  ScenarioConfig cfg = reference_scenario();
  cfg.duration = SimTime::from_seconds(30);

  Simulator sim;
  Topology topo(sim, cfg);
  std::vector<std::uint64_t> per_second;
  std::uint64_t last = 0;
  for (int s = 1; s <= 30; ++s) {
    sim.schedule(SimTime::from_seconds(s), [&] {
      const std::uint64_t now = topo.bottleneck().counters().delivered;
      per_second.push_back(now - last);
      last = now;
    });
  }
  topo.start();
  sim.run(cfg.duration);

  // At most ceil(1.5e6 / (576*8)) = 326 bottleneck packets leave per second.
  REQUIRE(per_second.size() == 30);
  for (auto n : per_second) CHECK(n <= 326);
  // Busy after start-up, though RED keeps the queue short enough to idle at times.
  for (std::size_t i = 5; i < per_second.size(); ++i) CHECK(per_second[i] >= 260);

  for (const Link* l : topo.links()) {
    const auto& c = l->counters();
    CHECK_MESSAGE(c.arrivals == c.delivered + c.dropped + l->in_system(), l->name());
  }

  const auto a = simulate(cfg);
  const auto b = simulate(cfg);
  CHECK(a.trace_digest == b.trace_digest);
  CHECK(a.summary.events_dispatched == b.summary.events_dispatched);
  for (std::size_t i = 0; i < a.customers.size(); ++i) CHECK(a.customers[i].delivered_bytes == b.customers[i].delivered_bytes);

  cfg.seed = 99;
  CHECK(simulate(cfg).trace_digest != a.trace_digest);
}

TEST_CASE("full-length reference run has the expected bottleneck volume") {
  const auto r = simulate(reference_scenario());
  const LinkReport* uplink = nullptr;
  for (const auto& l : r.links) {
    if (l.name == "router1->router2") uplink = &l;
  }
  REQUIRE(uplink != nullptr);
  // 1.5e6 / (576*8) * 100 s = 32,552 departures when saturated.
  CHECK(uplink->counters.delivered <= 32'553);
  CHECK(uplink->counters.delivered >= 26'000);  // above 80% busy
  CHECK(r.summary.final_clock == SimTime::from_seconds(100));
}
