#include "afsim/tcp.hpp"

#include <algorithm>
#include <cmath>

namespace afsim {

TcpRenoState::TcpRenoState(TcpRenoConfig cfg)
    : config(cfg), cwnd(cfg.initial_cwnd), ssthresh(cfg.initial_ssthresh), rto(cfg.rto_initial) {}

namespace {

void record_send(TcpRenoState& s, std::int64_t seq, SimTime now, TcpReaction& r) {
  const auto idx = static_cast<std::size_t>(seq);
  if (idx >= s.sent_at.size()) {
    s.sent_at.resize(idx + 1);
    s.retransmitted.resize(idx + 1, 0);
  }
  const bool again = seq < s.max_sent;
  s.sent_at[idx] = now;
  if (again) s.retransmitted[idx] = 1;
  s.max_sent = std::max(s.max_sent, seq + 1);
  r.emit.push_back({seq, again});
}

void fill_window(TcpRenoState& s, SimTime now, TcpReaction& r) {
  const auto window = static_cast<std::int64_t>(std::floor(s.effective_window()));
  while (s.snd_nxt < s.snd_una + window) {
    record_send(s, s.snd_nxt, now, r);
    ++s.snd_nxt;
  }
}

double halved_flight(const TcpRenoState& s) {
  return std::max(static_cast<double>(s.flight_size() / 2), 2.0);
}

}  // namespace

TcpReaction tcp_send_available(TcpRenoState& s, SimTime now) {
  TcpReaction r;
  fill_window(s, now, r);
  return r;
}

void tcp_rtt_update(TcpRenoState& s, double sample) {
  if (!s.srtt) {
    s.srtt = sample;
    s.rttvar = sample / 2.0;
  } else {
    s.rttvar = 0.75 * s.rttvar + 0.25 * std::abs(*s.srtt - sample);
    s.srtt = 0.875 * *s.srtt + 0.125 * sample;
  }
  s.rto = std::clamp(*s.srtt + 4.0 * s.rttvar, s.config.rto_min, s.config.rto_max);
}

TcpReaction tcp_on_ack(TcpRenoState& s, std::int64_t ack, SimTime now) {
  TcpReaction r;
  if (ack < s.snd_una) return r;

  if (ack == s.snd_una) {
    if (s.flight_size() <= 0) return r;
    ++s.dupacks;
    if (s.in_fast_recovery) {
      s.cwnd += 1.0;
      fill_window(s, now, r);
    } else if (s.dupacks == s.config.dupack_threshold) {
      s.ssthresh = halved_flight(s);
      s.cwnd = s.ssthresh + s.config.dupack_threshold;
      s.in_fast_recovery = true;
      ++s.fast_retransmits;
      r.fast_retransmit = true;
      record_send(s, s.snd_una, now, r);
      fill_window(s, now, r);
    }
    return r;
  }

  const auto last = static_cast<std::size_t>(ack - 1);
  if (last < s.retransmitted.size() && !s.retransmitted[last]) {
    tcp_rtt_update(s, (now - s.sent_at[last]).seconds());
  }
  s.snd_una = ack;
  s.snd_nxt = std::max(s.snd_nxt, s.snd_una);
  s.dupacks = 0;
  r.new_ack = true;
  if (s.in_fast_recovery) {
    // Reno leaves recovery on the first new ACK and deflates the window.
    s.in_fast_recovery = false;
    s.cwnd = s.ssthresh;
  } else if (s.cwnd < s.ssthresh) {
    s.cwnd += 1.0;
  } else {
    s.cwnd += 1.0 / s.cwnd;
  }
  fill_window(s, now, r);
  return r;
}

TcpReaction tcp_on_timeout(TcpRenoState& s, SimTime now) {
  TcpReaction r;
  ++s.timeouts;
  s.ssthresh = halved_flight(s);
  s.cwnd = 1.0;
  s.in_fast_recovery = false;
  s.dupacks = 0;
  s.rto = std::min(s.rto * 2.0, s.config.rto_max);
  s.snd_nxt = s.snd_una;  // go back N
  fill_window(s, now, r);
  return r;
}

std::int64_t sink_on_data(TcpSinkState& s, std::int64_t seq) {
  if (seq < s.next_expected || s.out_of_order.count(seq) != 0) {
    ++s.duplicates;
  } else if (seq == s.next_expected) {
    ++s.next_expected;
    auto it = s.out_of_order.begin();
    while (it != s.out_of_order.end() && *it == s.next_expected) {
      ++s.next_expected;
      it = s.out_of_order.erase(it);
    }
  } else {
    s.out_of_order.insert(seq);
  }
  return s.next_expected;
}

Packet udp_emit(UdpCbrState& s, SimTime now) {
  Packet p;
  p.kind = PacketKind::Udp;
  p.size_bytes = s.packet_bytes;
  p.color = Color::Green;
  p.seq = static_cast<std::int64_t>(s.sent);
  p.created_at = now;
  ++s.sent;
  s.next_send = now + s.gap();
  return p;
}

TcpSender::TcpSender(Simulator& sim, TcpRenoConfig config, std::int32_t customer, std::int32_t flow,
                     std::int32_t packet_bytes, UidSource uids, PacketSink out)
    : sim_(sim),
      state_(config),
      customer_(customer),
      flow_(flow),
      packet_bytes_(packet_bytes),
      uids_(std::move(uids)),
      out_(std::move(out)) {}

void TcpSender::start() { emit(tcp_send_available(state_, sim_.now())); }

void TcpSender::on_ack(const Packet& ack) {
  const TcpReaction r = tcp_on_ack(state_, ack.seq, sim_.now());
  if (r.new_ack || r.fast_retransmit) arm_timer();
  emit(r);
}

void TcpSender::emit(const TcpReaction& r) {
  for (const Segment& seg : r.emit) {
    Packet p;
    p.uid = uids_();
    p.customer = customer_;
    p.flow = flow_;
    p.kind = PacketKind::TcpData;
    p.size_bytes = packet_bytes_;
    p.color = Color::Green;
    p.seq = seg.seq;
    p.created_at = sim_.now();
    out_(p);
  }
  if (!r.emit.empty() && !sim_.pending(state_.retransmit_timer)) arm_timer();
}

void TcpSender::arm_timer() {
  deadline_ = sim_.now() + SimTime::from_seconds(state_.rto);
  // A pending timer that fires no later than the new deadline is kept and
  // re-armed lazily when it fires; only an earlier deadline needs a cancel.
  if (sim_.pending(state_.retransmit_timer)) {
    if (timer_fire_ <= deadline_) return;
    sim_.cancel(state_.retransmit_timer);
  }
  timer_fire_ = deadline_;
  state_.retransmit_timer = sim_.schedule(deadline_, [this] { on_timer(); });
}

void TcpSender::on_timer() {
  if (sim_.now() < deadline_) {
    timer_fire_ = deadline_;
    state_.retransmit_timer = sim_.schedule(deadline_, [this] { on_timer(); });
    return;
  }
  if (state_.flight_size() <= 0 && state_.snd_una >= state_.max_sent) return;
  const TcpReaction r = tcp_on_timeout(state_, sim_.now());
  arm_timer();
  emit(r);
}

UdpSource::UdpSource(Simulator& sim, std::int64_t rate_bps, std::int32_t customer, std::int32_t packet_bytes,
                     UidSource uids, PacketSink out)
    : sim_(sim), customer_(customer), uids_(std::move(uids)), out_(std::move(out)) {
  state_.rate_bps = rate_bps;
  state_.packet_bytes = packet_bytes;
}

void UdpSource::start(SimTime at) {
  state_.next_send = at;
  sim_.schedule(at, [this] { tick(); });
}

void UdpSource::tick() {
  Packet p = udp_emit(state_, sim_.now());
  p.uid = uids_();
  p.customer = customer_;
  out_(p);
  sim_.schedule(state_.next_send, [this] { tick(); });
}

}  // namespace afsim
