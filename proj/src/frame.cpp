#include "lrwpan/frame.hpp"

#include "lrwpan/check.hpp"

namespace lrwpan {

std::uint8_t GtsCharacteristics::encode() const {
  LRWPAN_CHECK(length >= 0 && length <= 15, "GTS length does not fit in four bits");
  std::uint8_t octet = static_cast<std::uint8_t>(length & 0x0f);
  if (direction == GtsDirection::kReceive) {
    octet |= 0x10;
  }
  if (allocate) {
    octet |= 0x20;
  }
  return octet;
}

GtsCharacteristics GtsCharacteristics::decode(std::uint8_t octet) {
  GtsCharacteristics c;
  c.length = octet & 0x0f;
  c.direction = (octet & 0x10) != 0 ? GtsDirection::kReceive : GtsDirection::kTransmit;
  c.allocate = (octet & 0x20) != 0;
  return c;
}

std::string_view to_string(FrameKind kind) {
  switch (kind) {
    case FrameKind::kBeacon:
      return "beacon";
    case FrameKind::kData:
      return "data";
    case FrameKind::kAck:
      return "ack";
    case FrameKind::kAssocRequest:
      return "association request";
    case FrameKind::kAssocResponse:
      return "association response";
    case FrameKind::kDataRequest:
      return "data request";
    case FrameKind::kGtsRequest:
      return "gts request";
  }
  return "unknown";
}

bool Frame::is_command() const {
  switch (kind()) {
    case FrameKind::kAssocRequest:
    case FrameKind::kAssocResponse:
    case FrameKind::kDataRequest:
    case FrameKind::kGtsRequest:
      return true;
    default:
      return false;
  }
}

namespace {

struct PayloadLength {
  std::size_t operator()(const BeaconBody& b) const {
    // superframe spec (2) + GTS spec (1) + [directions (1) + 3 per descriptor]
    // + pending address spec (1) + pending short addresses.
    std::size_t n = 2 + 1 + 1 + 2 * b.pending_addresses.size();
    if (!b.gts_list.empty()) {
      n += 1 + 3 * b.gts_list.size();
    }
    return n;
  }
  std::size_t operator()(const DataBody& d) const { return d.payload_len; }
  std::size_t operator()(const AckBody&) const { return 0; }
  std::size_t operator()(const AssocRequestBody&) const { return 2; }
  std::size_t operator()(const AssocResponseBody&) const { return 4; }
  std::size_t operator()(const DataRequestBody&) const { return 1; }
  std::size_t operator()(const GtsRequestBody&) const { return 2; }
};

}  // namespace

std::size_t Frame::payload_len() const { return std::visit(PayloadLength{}, body); }

std::size_t Frame::size_bytes() const {
  if (kind() == FrameKind::kAck) {
    return kAckFrameBytes;
  }
  return kMacHeaderBytes + payload_len() + kFcsBytes;
}

Frame make_data_frame(Address src, Address dst, std::uint8_t seq, std::size_t payload_len) {
  Frame f;
  f.src = src;
  f.dst = dst;
  f.seq = seq;
  f.ack_request = true;
  f.body = DataBody{payload_len};
  return f;
}

Frame make_ack(std::uint8_t seq, Address dst, bool frame_pending) {
  Frame f;
  f.dst = dst;
  f.seq = seq;
  f.frame_pending = frame_pending;
  f.body = AckBody{};
  return f;
}

}  // namespace lrwpan
