#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <vector>

#include "afsim/packet.hpp"
#include "afsim/simulator.hpp"

namespace afsim {

struct TcpRenoConfig {
  double max_window = 64.0;  // receiver window clamp, packets
  double initial_cwnd = 1.0;
  double initial_ssthresh = 64.0;
  double rto_min = 1.0;  // seconds
  double rto_initial = 3.0;
  double rto_max = 64.0;
  int dupack_threshold = 3;
};

struct Segment {
  std::int64_t seq = 0;
  bool retransmission = false;
  bool operator==(const Segment&) const = default;
};

// Packet-counting Reno sender state. Sequence numbers count whole segments.
struct TcpRenoState {
  explicit TcpRenoState(TcpRenoConfig cfg = {});

  TcpRenoConfig config;
  double cwnd;
  double ssthresh;
  std::int64_t snd_una = 0;   // oldest unacknowledged segment
  std::int64_t snd_nxt = 0;   // next segment to send
  std::int64_t max_sent = 0;  // one past the highest segment ever sent
  int dupacks = 0;
  bool in_fast_recovery = false;
  std::optional<double> srtt;
  double rttvar = 0.0;
  double rto;
  EventHandle retransmit_timer;

  // Per-segment send bookkeeping for RTT sampling (Karn's rule).
  std::vector<SimTime> sent_at;
  std::vector<std::uint8_t> retransmitted;

  std::uint64_t timeouts = 0;
  std::uint64_t fast_retransmits = 0;

  std::int64_t flight_size() const { return snd_nxt - snd_una; }
  double effective_window() const { return cwnd < config.max_window ? cwnd : config.max_window; }
};

struct TcpReaction {
  std::vector<Segment> emit;
  bool new_ack = false;
  bool fast_retransmit = false;
};

// Sends whatever the window currently allows.
TcpReaction tcp_send_available(TcpRenoState& s, SimTime now);

// Cumulative ACK carrying the next segment the receiver expects.
TcpReaction tcp_on_ack(TcpRenoState& s, std::int64_t ack, SimTime now);

TcpReaction tcp_on_timeout(TcpRenoState& s, SimTime now);

// Jacobson/Karels estimator; sample in seconds.
void tcp_rtt_update(TcpRenoState& s, double sample);

// Cumulative-ACK receiver without delayed ACKs.
struct TcpSinkState {
  std::int64_t next_expected = 0;
  std::set<std::int64_t> out_of_order;
  std::uint64_t duplicates = 0;
};

// Returns the ACK number (next expected segment) to send back.
std::int64_t sink_on_data(TcpSinkState& s, std::int64_t seq);

struct UdpCbrState {
  std::int64_t rate_bps = 1'280'000;
  std::int32_t packet_bytes = kDataPacketBytes;
  SimTime next_send;
  std::uint64_t sent = 0;

  SimTime gap() const { return serialization_time(packet_bytes, rate_bps); }
};

// Emits one datagram; packet identity fields are left for the caller.
Packet udp_emit(UdpCbrState& s, SimTime now);

using PacketSink = std::function<void(const Packet&)>;
using UidSource = std::function<std::uint64_t()>;

// Greedy Reno source bound to a simulator.
class TcpSender {
 public:
  TcpSender(Simulator& sim, TcpRenoConfig config, std::int32_t customer, std::int32_t flow,
            std::int32_t packet_bytes, UidSource uids, PacketSink out);

  void start();
  void on_ack(const Packet& ack);

  const TcpRenoState& state() const { return state_; }

 private:
  void emit(const TcpReaction& r);
  void arm_timer();
  void on_timer();

  Simulator& sim_;
  TcpRenoState state_;
  std::int32_t customer_;
  std::int32_t flow_;
  std::int32_t packet_bytes_;
  UidSource uids_;
  PacketSink out_;
  SimTime deadline_;
  SimTime timer_fire_;
};

class UdpSource {
 public:
  UdpSource(Simulator& sim, std::int64_t rate_bps, std::int32_t customer, std::int32_t packet_bytes, UidSource uids,
            PacketSink out);

  void start(SimTime at);
  const UdpCbrState& state() const { return state_; }

 private:
  void tick();

  Simulator& sim_;
  UdpCbrState state_;
  std::int32_t customer_;
  UidSource uids_;
  PacketSink out_;
};

}  // namespace afsim
