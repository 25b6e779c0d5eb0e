#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <variant>
#include <vector>

namespace lrwpan {

/// 16-bit MAC address. Nodes use their id before and after association.
using Address = std::uint16_t;
inline constexpr Address kCoordinatorAddress = 0;
inline constexpr Address kBroadcastAddress = 0xffff;

inline constexpr std::size_t kMacHeaderBytes = 11;
inline constexpr std::size_t kFcsBytes = 2;
inline constexpr std::size_t kAckFrameBytes = 5;

enum class GtsDirection : std::uint8_t { kTransmit = 0, kReceive = 1 };

struct GtsDescriptor {
  Address dev_addr = 0;
  int start_slot = 0;
  int length = 0;
  GtsDirection direction = GtsDirection::kTransmit;

  int end_slot() const { return start_slot + length; }  // exclusive
  bool operator==(const GtsDescriptor&) const = default;
};

/// GTS characteristics octet: bits 0-3 length, bit 4 direction,
/// bit 5 characteristics type (1 = allocation, 0 = deallocation).
struct GtsCharacteristics {
  int length = 1;
  GtsDirection direction = GtsDirection::kTransmit;
  bool allocate = true;

  std::uint8_t encode() const;
  static GtsCharacteristics decode(std::uint8_t octet);
  bool operator==(const GtsCharacteristics&) const = default;
};

struct SuperframeSpec {
  int beacon_order = 15;
  int superframe_order = 15;
  int final_cap_slot = 15;
  bool battery_life_extension = false;
  bool pan_coordinator = true;
  bool association_permit = true;
};

struct BeaconBody {
  SuperframeSpec superframe;
  bool gts_permit = true;
  std::vector<GtsDescriptor> gts_list;
  std::vector<Address> pending_addresses;
};
struct DataBody {
  std::size_t payload_len = 0;
};
struct AckBody {};
struct AssocRequestBody {
  std::uint8_t capability = 0x8e;
};
enum class AssocStatus : std::uint8_t { kSuccess = 0, kPanAtCapacity = 1, kAccessDenied = 2 };
struct AssocResponseBody {
  Address assigned = kBroadcastAddress;
  AssocStatus status = AssocStatus::kSuccess;
};
struct DataRequestBody {};
struct GtsRequestBody {
  GtsCharacteristics characteristics;
};

/// Alternative order matches FrameKind.
using FrameBody = std::variant<BeaconBody, DataBody, AckBody, AssocRequestBody,
                               AssocResponseBody, DataRequestBody, GtsRequestBody>;

enum class FrameKind : std::uint8_t {
  kBeacon,
  kData,
  kAck,
  kAssocRequest,
  kAssocResponse,
  kDataRequest,
  kGtsRequest,
};

std::string_view to_string(FrameKind kind);

struct Frame {
  Address src = 0;
  Address dst = kBroadcastAddress;
  std::uint8_t seq = 0;
  bool ack_request = false;
  bool frame_pending = false;
  FrameBody body = DataBody{};

  FrameKind kind() const { return static_cast<FrameKind>(body.index()); }
  bool is_command() const;

  /// MAC payload octets (beacon fields, command payload or MSDU).
  std::size_t payload_len() const;
  /// MHR + payload + FCS; acknowledgments are a fixed 5 octets.
  std::size_t size_bytes() const;
};

Frame make_data_frame(Address src, Address dst, std::uint8_t seq, std::size_t payload_len);
/// `dst` is bookkeeping only; it does not change the 5-octet size.
Frame make_ack(std::uint8_t seq, Address dst, bool frame_pending = false);

}  // namespace lrwpan
