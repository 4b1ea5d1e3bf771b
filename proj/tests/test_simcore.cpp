#include <vector>

#include "afsim/rng.hpp"
#include "afsim/simulator.hpp"
#include "doctest.h"

using namespace afsim;

TEST_CASE("event at t=0 dispatches before later events") {
  Simulator sim;
  std::vector<int> order;
  sim.schedule(SimTime::from_ms(5), [&] { order.push_back(2); });
  sim.schedule(SimTime::from_ns(0), [&] { order.push_back(1); });
  sim.run(SimTime::from_seconds(1));
  CHECK(order == std::vector<int>{1, 2});
}

TEST_CASE("equal fire times dispatch in schedule order") {
  Simulator sim;
  std::vector<int> order;
  for (int i = 0; i < 50; ++i) sim.schedule(SimTime::from_us(10), [&order, i] { order.push_back(i); });
  sim.run(SimTime::from_ms(1));
  REQUIRE(order.size() == 50);
  for (int i = 0; i < 50; ++i) CHECK(order[static_cast<std::size_t>(i)] == i);
}

TEST_CASE("scheduling in the past is rejected") {
  Simulator sim;
  sim.schedule(SimTime::from_ms(10), [] {});
  sim.run(SimTime::from_ms(10));
  CHECK_THROWS_AS(sim.schedule(SimTime::from_ns(SimTime::from_ms(10).ns() - 1), [] {}), SchedulingError);
  CHECK_NOTHROW(sim.schedule(SimTime::from_ms(10), [] {}));
}

TEST_CASE("cancel semantics") {
  Simulator sim;
  bool fired = false;
  auto h = sim.schedule(SimTime::from_ms(1), [&] { fired = true; });
  CHECK(sim.cancel(h));
  CHECK_FALSE(sim.cancel(h));
  sim.run(SimTime::from_ms(2));
  CHECK_FALSE(fired);

  auto done = sim.schedule(SimTime::from_ms(3), [] {});
  sim.run(SimTime::from_ms(4));
  CHECK_FALSE(sim.cancel(done));
}

TEST_CASE("slot reuse does not resurrect a stale handle") {
  Simulator sim;
  int fired = 0;
  auto h = sim.schedule(SimTime::from_ms(1), [&] { ++fired; });
  sim.run(SimTime::from_ms(1));
  sim.schedule(SimTime::from_ms(2), [&] { ++fired; });
  CHECK_FALSE(sim.cancel(h));
  sim.run(SimTime::from_ms(3));
  CHECK(fired == 2);
}

TEST_CASE("empty run advances the clock to the horizon") {
  Simulator sim;
  const auto s = sim.run(SimTime::from_seconds(100));
  CHECK(s.events_dispatched == 0);
  CHECK(s.final_clock == SimTime::from_seconds(100));
}

TEST_CASE("clock never decreases across dispatches") {
  Simulator sim;
  RngStream rng(7, "test");
  std::vector<SimTime> seen;
  for (int i = 0; i < 500; ++i) {
    sim.schedule(SimTime::from_ns(static_cast<std::int64_t>(rng.uniform() * 1e9)), [&] {
      seen.push_back(sim.now());
      if (seen.size() < 800) sim.schedule_in(SimTime::from_ns(static_cast<std::int64_t>(rng.uniform() * 1e6)), [] {});
    });
  }
  sim.set_trace([&, last = SimTime()](SimTime t, std::uint64_t) mutable {
    CHECK(t >= last);
    last = t;
  });
  sim.run(SimTime::from_seconds(2));
  CHECK(seen.size() == 500);
}

TEST_CASE("handler failure aborts the run with context") {
  Simulator sim;
  sim.schedule(SimTime::from_ms(7), [] { throw std::runtime_error("boom"); });
  try {
    sim.run(SimTime::from_seconds(1));
    FAIL("expected SimulationError");
  } catch (const SimulationError& e) {
    CHECK(e.at() == SimTime::from_ms(7));
    CHECK(std::string(e.what()).find("boom") != std::string::npos);
  }
}

TEST_CASE("rng streams are reproducible and independent by label") {
  RngStream a(42, "red.router1"), b(42, "red.router1"), c(42, "tcp.start"), d(43, "red.router1");
  bool differs_c = false, differs_d = false;
  for (int i = 0; i < 100; ++i) {
    const double x = a.uniform();
    CHECK(x == b.uniform());
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
    differs_c |= x != c.uniform();
    differs_d |= x != d.uniform();
  }
  CHECK(differs_c);
  CHECK(differs_d);
}

TEST_CASE("sim time arithmetic") {
  CHECK_THROWS(SimTime::from_ns(-1));
  CHECK_THROWS(SimTime::from_seconds(-0.5));
  CHECK(SimTime::from_seconds(100).ns() == 100'000'000'000LL);
  CHECK((SimTime::from_ms(1) - SimTime::from_ms(2)).ns() == 0);
}
