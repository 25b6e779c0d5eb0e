#include "lrwpan/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace lrwpan::metrics {

std::string_view to_string(DropCause cause) {
  switch (cause) {
    case DropCause::kCollisionData:
      return "collision_data";
    case DropCause::kCollisionOther:
      return "collision_other";
    case DropCause::kChannelAccessFailure:
      return "channel_access_failure";
    case DropCause::kNoAckExhausted:
      return "no_ack_exhausted";
    case DropCause::kQueueDrop:
      return "queue_drop";
  }
  return "unknown";
}

double throughput(const Counters& c, double sim_time_s, int n_nodes) {
  if (!(sim_time_s > 0.0) || n_nodes <= 0) {
    throw std::invalid_argument("invalid-input: throughput needs positive time and node count");
  }
  return static_cast<double>(c.received_data_bytes) * 8.0 /
         (sim_time_s * static_cast<double>(n_nodes) * 1000.0);
}

std::optional<double> packet_delivery_ratio(const Counters& c) {
  if (c.sent_data_frames == 0) {
    return std::nullopt;
  }
  return static_cast<double>(c.received_data_frames) / static_cast<double>(c.sent_data_frames) *
         100.0;
}

std::optional<double> collision_rate(const Counters& c) {
  const auto data = c.drops(DropCause::kCollisionData);
  const auto total = data + c.drops(DropCause::kCollisionOther);
  if (total == 0) {
    return std::nullopt;
  }
  return static_cast<double>(data) / static_cast<double>(total) * 100.0;
}

double duty_cycle(const mac::SuperframeConfig& cfg) {
  return 100.0 * std::ldexp(1.0, cfg.superframe_order - cfg.beacon_order);
}

MetricsReport make_report(const mac::SuperframeConfig& cfg, int n_nodes, std::uint64_t seed,
                          double sim_time_s, const Counters& counters) {
  MetricsReport r;
  r.beacon_order = cfg.beacon_order;
  r.superframe_order = cfg.superframe_order;
  r.n_nodes = n_nodes;
  r.seed = seed;
  r.sim_time_s = sim_time_s;
  r.throughput_kbps = throughput(counters, sim_time_s, n_nodes);
  r.pdr_pct = packet_delivery_ratio(counters);
  r.collision_pct = collision_rate(counters);
  r.duty_cycle_pct = duty_cycle(cfg);
  r.counters = counters;
  return r;
}

bool CollisionMonitor::collided(const phy::Transmission& tx) {
  if (tx.frame.dst == kBroadcastAddress) {
    for (auto o : tx.outcomes) {
      if (o == phy::RxOutcome::kCorrupted) {
        return true;
      }
    }
    return false;
  }
  return tx.frame.dst < tx.outcomes.size() && tx.corrupted_at(tx.frame.dst);
}

void CollisionMonitor::on_transmission_end(const phy::Transmission& tx) {
  if (!collided(tx)) {
    return;
  }
  const bool data = tx.frame.kind() == FrameKind::kData;
  ++counters_.drops(data ? DropCause::kCollisionData : DropCause::kCollisionOther);
  if (trace_.enabled()) {
    std::string ev = data ? "collision data frame" : "collision other frame";
    ev += " (";
    ev += to_string(tx.frame.kind());
    ev += ") seq:" + std::to_string(tx.frame.seq) + " dst:" + std::to_string(tx.frame.dst);
    trace_.emit(tx.end, tx.sender, ev);
  }
}

}  // namespace lrwpan::metrics
