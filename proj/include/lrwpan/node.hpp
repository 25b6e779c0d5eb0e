#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <optional>

#include "lrwpan/mac.hpp"

namespace lrwpan::node {

/// Open-loop constant bit rate generator: one packet at start_offset and
/// every interval after, up to and including the stop time.
struct CbrConfig {
  std::size_t payload_bytes = 70;
  Symbols interval = 12500;  // 0.2 s
  SymbolTime start_offset;
};

class CbrSource {
 public:
  CbrSource(Simulator& sim, NodeId owner, CbrConfig cfg, std::function<void()> on_packet);

  void start(SymbolTime stop);
  std::uint64_t generated() const { return generated_; }
  const CbrConfig& config() const { return cfg_; }

  /// Packets a source emits over [start_offset, stop].
  static std::uint64_t expected_count(const CbrConfig& cfg, SymbolTime stop);

 private:
  void tick();

  Simulator& sim_;
  NodeId owner_;
  CbrConfig cfg_;
  std::function<void()> on_packet_;
  SymbolTime stop_;
  std::uint64_t generated_ = 0;
};

struct Packet {
  std::uint64_t id = 0;
  SymbolTime created;
};

/// Bounded FIFO. A push onto a full queue is refused (the newest packet is
/// the one dropped).
class TxQueue {
 public:
  explicit TxQueue(std::size_t capacity) : capacity_(capacity) {}

  bool push(Packet p);
  /// Returns a packet whose transmission was interrupted to the head,
  /// regardless of capacity.
  void push_front(Packet p) { q_.push_front(p); }
  std::optional<Packet> pop();

  std::size_t size() const { return q_.size(); }
  bool empty() const { return q_.empty(); }
  std::size_t capacity() const { return capacity_; }

 private:
  std::size_t capacity_;
  std::deque<Packet> q_;
};

/// Per-device packet accounting, sender side.
struct DeviceStats {
  std::uint64_t generated = 0;
  std::uint64_t acked = 0;
  std::uint64_t channel_access_failures = 0;
  std::uint64_t no_ack_exhausted = 0;
  std::uint64_t queue_drops = 0;
  std::uint64_t queued = 0;
  std::uint64_t in_flight = 0;

  /// generated == acked + drops + queued + in_flight
  bool conserved() const {
    return generated ==
           acked + channel_access_failures + no_ack_exhausted + queue_drops + queued + in_flight;
  }
};

struct DeviceOptions {
  bool use_gts = false;
  int gts_length = 1;
  GtsDirection gts_direction = GtsDirection::kTransmit;
  SymbolTime start_at;        // begin scanning
  Symbols association_retry = 62500;
  bool traffic = true;
  CbrConfig cbr;
  std::size_t queue_capacity = 50;
  int scan_exponent = 6;
};

/// A device running the scan, associate, optional GTS request workflow and
/// feeding CBR traffic to the coordinator.
class Device {
 public:
  Device(mac::MacContext ctx, NodeId id, DeviceOptions options);

  Device(const Device&) = delete;
  Device& operator=(const Device&) = delete;

  /// Schedules the workflow; traffic stops being generated after `stop`.
  void start(SymbolTime stop);

  mac::DeviceMac& mac() { return mac_; }
  const mac::DeviceMac& mac() const { return mac_; }
  const DeviceOptions& options() const { return options_; }
  DeviceStats stats() const;
  /// Set when a GTS attempt failed and traffic moved to the CAP.
  bool fell_back_to_cap() const { return cap_fallback_; }
  std::uint64_t associations() const { return associations_; }

 private:
  void associate();
  void on_associate(std::optional<mac::AssociationFailure> failure);
  void on_packet();
  void pump();
  bool gts_pending() const;
  void on_sent(mac::TxPath path, Packet p, mac::TxStatus status);

  mac::MacContext ctx_;
  NodeId id_;
  DeviceOptions options_;
  mac::DeviceMac mac_;
  CbrSource cbr_;
  TxQueue queue_;
  std::optional<Packet> in_flight_;
  bool cap_fallback_ = false;
  std::uint64_t next_packet_ = 0;
  std::uint64_t associations_ = 0;
  DeviceStats stats_;
};

/// PAN coordinator role: beacons from t = first_beacon on.
class Coordinator {
 public:
  Coordinator(mac::MacContext ctx, NodeId id, mac::CoordinatorMac::Options options)
      : mac_(ctx, id, options) {}

  void start(SymbolTime first_beacon = SymbolTime{}) { mac_.start(first_beacon); }

  mac::CoordinatorMac& mac() { return mac_; }
  const mac::CoordinatorMac& mac() const { return mac_; }

 private:
  mac::CoordinatorMac mac_;
};

}  // namespace lrwpan::node
