#include "afsim/packet.hpp"

namespace afsim {

std::string_view to_string(Color c) {
  switch (c) {
    case Color::Green: return "green";
    case Color::Yellow: return "yellow";
    case Color::Red: return "red";
  }
  return "?";
}

std::string_view to_string(PacketKind k) {
  switch (k) {
    case PacketKind::TcpData: return "tcp-data";
    case PacketKind::TcpAck: return "tcp-ack";
    case PacketKind::Udp: return "udp";
  }
  return "?";
}

}  // namespace afsim
