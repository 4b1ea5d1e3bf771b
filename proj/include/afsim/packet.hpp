#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include "afsim/sim_time.hpp"

namespace afsim {

enum class PacketKind : std::uint8_t { TcpData, TcpAck, Udp };

// Drop precedence, best first.
enum class Color : std::uint8_t { Green = 0, Yellow = 1, Red = 2 };
inline constexpr std::size_t kColorCount = 3;
inline constexpr std::array<Color, kColorCount> kAllColors{Color::Green, Color::Yellow, Color::Red};

constexpr std::size_t index_of(Color c) { return static_cast<std::size_t>(c); }
std::string_view to_string(Color c);
std::string_view to_string(PacketKind k);

inline constexpr std::int32_t kDataPacketBytes = 576;
inline constexpr std::int32_t kAckPacketBytes = 40;

struct Packet {
  std::uint64_t uid = 0;
  std::int32_t customer = 0;  // 1-based customer index
  std::int32_t flow = 0;      // source index within the customer
  PacketKind kind = PacketKind::TcpData;
  std::int32_t size_bytes = kDataPacketBytes;
  Color color = Color::Green;
  std::int64_t seq = 0;  // TCP data: segment number; TCP ack: next expected segment
  SimTime created_at;
};

}  // namespace afsim
