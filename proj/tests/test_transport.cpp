#include <cmath>

#include "afsim/link.hpp"
#include "afsim/tcp.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace afsim;

namespace {

const SimTime t0 = SimTime::from_seconds(1);

// Sender that has sent `flight` segments starting at 0 with the given cwnd.
TcpRenoState with_flight(int flight, double cwnd, double ssthresh = 64) {
  TcpRenoState s;
  s.cwnd = static_cast<double>(flight);
  tcp_send_available(s, SimTime());
  s.cwnd = cwnd;
  s.ssthresh = ssthresh;
  return s;
}

}  // namespace

TEST_CASE("initial window sends one segment") {
  TcpRenoState s;
  const auto r = tcp_send_available(s, SimTime());
  REQUIRE(r.emit.size() == 1);
  CHECK(r.emit[0] == Segment{0, false});
  CHECK(s.rto == doctest::Approx(3.0));
  CHECK(s.ssthresh == doctest::Approx(64.0));
}

TEST_CASE("slow start step") {
  TcpRenoState s;
  tcp_send_available(s, SimTime());
  const auto r = tcp_on_ack(s, 1, t0);
  CHECK(s.cwnd == doctest::Approx(2.0));
  CHECK(r.new_ack);
  CHECK(r.emit.size() == 2);
}

TEST_CASE("congestion avoidance adds 1/cwnd per ack") {
  TcpRenoState s = with_flight(10, 10.0, 8.0);
  tcp_on_ack(s, 1, t0);
  CHECK(s.cwnd == doctest::Approx(10.1));
}

TEST_CASE("stale ack is ignored") {
  TcpRenoState s = with_flight(10, 10.0);
  tcp_on_ack(s, 5, t0);
  const double cwnd = s.cwnd;
  const auto r = tcp_on_ack(s, 3, t0);
  CHECK(r.emit.empty());
  CHECK(s.snd_una == 5);
  CHECK(s.cwnd == cwnd);
}

TEST_CASE("three duplicate acks trigger fast retransmit (hand trace)") {
  // Segments 0..19 outstanding, segment 0 lost; the receiver answers each
  // later arrival with ACK 0.
  TcpRenoState s = with_flight(20, 20.0, 64.0);
  REQUIRE(s.flight_size() == 20);
  CHECK(tcp_on_ack(s, 0, t0).emit.empty());
  CHECK(tcp_on_ack(s, 0, t0).emit.empty());
  const auto r = tcp_on_ack(s, 0, t0);
  CHECK(r.fast_retransmit);
  CHECK(s.ssthresh == doctest::Approx(10.0));
  CHECK(s.cwnd == doctest::Approx(13.0));
  CHECK(s.in_fast_recovery);
  REQUIRE(r.emit.size() == 1);
  CHECK(r.emit[0] == Segment{0, true});

  // Window inflation: 13 + 8 more dupacks = 21 > flight 20, so new data flows.
  for (int i = 0; i < 7; ++i) CHECK(tcp_on_ack(s, 0, t0).emit.empty());
  const auto more = tcp_on_ack(s, 0, t0);
  CHECK(s.cwnd == doctest::Approx(21.0));
  REQUIRE(more.emit.size() == 1);
  CHECK(more.emit[0] == Segment{20, false});

  // The retransmission fills the hole: recovery ends with cwnd = ssthresh.
  const auto exit = tcp_on_ack(s, 21, t0);
  CHECK_FALSE(s.in_fast_recovery);
  CHECK(s.cwnd == doctest::Approx(10.0));
  CHECK(s.snd_una == 21);
  CHECK(exit.emit.size() == 10);
}

TEST_CASE("timeout resets the window") {
  TcpRenoState s = with_flight(30, 30.0);
  const auto r = tcp_on_timeout(s, t0);
  CHECK(s.cwnd == doctest::Approx(1.0));
  CHECK(s.ssthresh == doctest::Approx(15.0));
  REQUIRE(r.emit.size() == 1);
  CHECK(r.emit[0] == Segment{0, true});
  CHECK(s.snd_nxt == 1);
}

TEST_CASE("consecutive timeouts back off exponentially up to 64 s") {
  TcpRenoState s = with_flight(4, 4.0);
  s.rto = 1.0;
  tcp_on_timeout(s, t0);
  CHECK(s.rto == doctest::Approx(2.0));
  tcp_on_timeout(s, t0);
  CHECK(s.rto == doctest::Approx(4.0));
  for (int i = 0; i < 10; ++i) tcp_on_timeout(s, t0);
  CHECK(s.rto == doctest::Approx(64.0));
  CHECK(s.ssthresh >= 2.0);
}

TEST_CASE("timeout during fast recovery abandons recovery") {
  TcpRenoState s = with_flight(20, 20.0);
  for (int i = 0; i < 3; ++i) tcp_on_ack(s, 0, t0);
  REQUIRE(s.in_fast_recovery);
  tcp_on_timeout(s, t0);
  CHECK_FALSE(s.in_fast_recovery);
  CHECK(s.cwnd == doctest::Approx(1.0));
}

TEST_CASE("rtt estimator") {
  TcpRenoState s;
  tcp_rtt_update(s, 0.2);
  CHECK(*s.srtt == doctest::Approx(0.2));
  CHECK(s.rttvar == doctest::Approx(0.1));
  CHECK(s.rto == doctest::Approx(1.0));  // max(1, 0.6)

  TcpRenoState g;
  tcp_rtt_update(g, 0.5);
  CHECK(g.rto == doctest::Approx(1.5));  // 3 * 0.5

  // Constant samples drive rttvar to zero and rto towards max(rto_min, s).
  for (double sample : {0.5, 2.0}) {
    TcpRenoState c;
    for (int i = 0; i < 200; ++i) tcp_rtt_update(c, sample);
    CHECK(c.rto == doctest::Approx(oracle::rto_after(sample, 200, 1.0)).epsilon(1e-12));
    CHECK(c.rto == doctest::Approx(std::max(1.0, sample)).epsilon(1e-6));
    CHECK(c.rto >= 1.0);
  }
}

TEST_CASE("karn's rule: retransmitted segments give no rtt sample") {
  TcpRenoState s;
  tcp_send_available(s, SimTime());
  tcp_on_timeout(s, SimTime::from_seconds(3));
  const double rto = s.rto;
  tcp_on_ack(s, 1, SimTime::from_seconds(3.5));
  CHECK_FALSE(s.srtt.has_value());
  CHECK(s.rto == rto);
}

TEST_CASE("window law: in-flight never exceeds min(cwnd, 64)") {
  TcpRenoState s;
  tcp_send_available(s, SimTime());
  std::int64_t ack = 0;
  for (int i = 0; i < 2000; ++i) {
    ack += 1;
    tcp_on_ack(s, ack, SimTime::from_ms(i));
    CHECK(s.flight_size() <= static_cast<std::int64_t>(std::floor(s.effective_window())));
    CHECK(s.flight_size() <= 64);
  }
  CHECK(s.cwnd > 64.0);
  CHECK(s.flight_size() == 64);
}

TEST_CASE("sink acknowledges cumulatively") {
  TcpSinkState k;
  CHECK(sink_on_data(k, 0) == 1);
  CHECK(sink_on_data(k, 1) == 2);
  // Segment 2 lost: 3 and 4 produce duplicate ACKs for 2.
  CHECK(sink_on_data(k, 3) == 2);
  CHECK(sink_on_data(k, 4) == 2);
  // Retransmission fills the gap.
  CHECK(sink_on_data(k, 2) == 5);
  CHECK(sink_on_data(k, 1) == 5);
  CHECK(k.duplicates == 1);
}

TEST_CASE("udp cbr timing") {
  UdpCbrState u;
  CHECK(u.gap().ns() == 3'600'000);  // 576*8/1.28e6
  const Packet p = udp_emit(u, SimTime::from_ms(10));
  CHECK(p.size_bytes == 576);
  CHECK(p.kind == PacketKind::Udp);
  CHECK(p.color == Color::Green);
  CHECK(u.next_send == SimTime::from_us(13'600));
  // Offered load 1.28 / 1.5.
  CHECK(static_cast<double>(u.rate_bps) / 1.5e6 == doctest::Approx(0.8533).epsilon(1e-3));
}

TEST_CASE("udp source emits periodically for 100 s") {
  Simulator sim;
  std::vector<SimTime> at;
  UdpSource src(sim, 1'280'000, 10, 576, [n = std::uint64_t{0}]() mutable { return ++n; },
                [&](const Packet&) { at.push_back(sim.now()); });
  src.start(SimTime());
  sim.run(SimTime::from_ns(SimTime::from_seconds(100).ns() - 1));
  // Emissions at k * 3.6 ms for k = 0 .. floor(99.9999 / 0.0036) = 27777.
  CHECK(at.size() == 27'778);
  for (std::size_t i = 1; i < at.size(); ++i) REQUIRE((at[i] - at[i - 1]).ns() == 3'600'000);
}

TEST_CASE("lone lossless tcp is window limited over the GEO path") {
  // One sender, forward 125 ms + 125 ms at 1.5 Mbps, ACKs back the same way.
  Simulator sim;
  Link fwd(sim, "fwd", {1'500'000, SimTime::from_ms(250)}, std::make_unique<DropTailQueue>(1000));
  Link rev(sim, "rev", {1'500'000, SimTime::from_ms(250)}, std::make_unique<DropTailQueue>(1000));
  TcpSinkState sink;
  std::uint64_t uid = 0;
  TcpSender sender(sim, TcpRenoConfig{}, 1, 0, 576, [&] { return ++uid; }, [&](const Packet& p) { fwd.send(p); });
  std::uint64_t delivered = 0;
  fwd.set_receiver([&](const Packet& p) {
    ++delivered;
    Packet ack = p;
    ack.kind = PacketKind::TcpAck;
    ack.size_bytes = 40;
    ack.seq = sink_on_data(sink, p.seq);
    rev.send(ack);
  });
  rev.set_receiver([&](const Packet& a) { sender.on_ack(a); });
  sim.schedule(SimTime(), [&] { sender.start(); });
  sim.run(SimTime::from_seconds(100));
  const double bps = static_cast<double>(delivered) * 576 * 8 / 100.0;
  // 64 packets per ~0.5 s round trip: at most ~590 kbps, well short of 1.5 Mbps.
  CHECK(bps <= 64 * 576 * 8 / 0.5);
  CHECK(bps > 450'000);
  CHECK(sender.state().timeouts == 0);
  CHECK(sender.state().flight_size() == 64);
}
