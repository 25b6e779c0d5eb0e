#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "lrwpan/phy.hpp"
#include "lrwpan/superframe.hpp"
#include "lrwpan/trace.hpp"

namespace lrwpan::metrics {

enum class DropCause : std::uint8_t {
  kCollisionData,
  kCollisionOther,
  kChannelAccessFailure,
  kNoAckExhausted,
  kQueueDrop,
};
inline constexpr std::size_t kDropCauseCount = 5;

std::string_view to_string(DropCause cause);

/// Run-wide counters. Data frames only for sent/received; collision
/// entries count corrupted frames of every kind, split data / other.
struct Counters {
  std::uint64_t sent_data_frames = 0;      // every (re)transmission
  std::uint64_t received_data_frames = 0;  // intact, non-duplicate, at destination MAC
  std::uint64_t received_data_bytes = 0;   // MSDU octets of the above
  std::array<std::uint64_t, kDropCauseCount> dropped{};

  std::uint64_t& drops(DropCause c) { return dropped[static_cast<std::size_t>(c)]; }
  std::uint64_t drops(DropCause c) const { return dropped[static_cast<std::size_t>(c)]; }
};

/// Throughput per node in kbit/s: bytes * 8 / (time * nodes * 1000).
/// Throws std::invalid_argument for non-positive time or node count.
double throughput(const Counters& c, double sim_time_s, int n_nodes);

/// received / sent * 100; absent when nothing was sent.
std::optional<double> packet_delivery_ratio(const Counters& c);

/// Data collisions as a percentage of all collisions; absent without collisions.
std::optional<double> collision_rate(const Counters& c);

/// 100 * 2^(so - bo).
double duty_cycle(const mac::SuperframeConfig& cfg);

struct MetricsReport {
  int beacon_order = 0;
  int superframe_order = 0;
  int n_nodes = 0;
  std::uint64_t seed = 0;
  double sim_time_s = 0.0;
  double throughput_kbps = 0.0;
  std::optional<double> pdr_pct;
  std::optional<double> collision_pct;
  double duty_cycle_pct = 0.0;
  Counters counters;
};

MetricsReport make_report(const mac::SuperframeConfig& cfg, int n_nodes, std::uint64_t seed,
                          double sim_time_s, const Counters& counters);

/// Watches the channel and attributes corrupted frames: unicast frames
/// count when corrupted at their destination, broadcasts when corrupted at
/// any listener.
class CollisionMonitor : public phy::ChannelObserver {
 public:
  CollisionMonitor(Counters& counters, TraceSink& trace) : counters_(counters), trace_(trace) {}

  void on_transmission_end(const phy::Transmission& tx) override;

  /// Whether `tx` counts as a collision under the attribution rule.
  static bool collided(const phy::Transmission& tx);

 private:
  Counters& counters_;
  TraceSink& trace_;
};

}  // namespace lrwpan::metrics
