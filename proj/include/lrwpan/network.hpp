#pragma once

#include <memory>
#include <ostream>
#include <vector>

#include "lrwpan/metrics.hpp"
#include "lrwpan/node.hpp"

namespace lrwpan {

/// Everything needed to build and run one star network.
struct RunParams {
  mac::SuperframeConfig superframe;
  int n_devices = 10;
  int n_gts_devices = 0;  // the first n_gts_devices devices request a GTS
  int gts_length = 1;
  GtsDirection gts_direction = GtsDirection::kTransmit;
  double radius_m = 10.0;
  double range_m = 18.0;
  std::size_t payload_bytes = 70;
  double interval_s = 0.2;
  double sim_time_s = 60.0;
  double stagger_s = 2.0;  // device k starts scanning at k * stagger_s
  /// Traffic start; negative means one stagger step after the last device starts.
  double traffic_start_s = -1.0;
  std::size_t queue_capacity = 50;
  std::uint64_t seed = 1;
  bool gts_permit = true;
  int scan_exponent = 6;
  double association_retry_s = 1.0;
  /// Overrides the circle placement when non-empty (one entry per device).
  std::vector<phy::Position> positions;

  void validate() const;
  double effective_traffic_start_s() const;
};

/// Placement of device k (1-based) of n on a circle around the origin.
phy::Position circle_position(int k, int n, double radius_m);

/// Records channel activity for invariant checks.
class ChannelLog : public phy::ChannelObserver {
 public:
  struct Tx {
    NodeId sender;
    FrameKind kind;
    Address dst;
    SymbolTime start;
    SymbolTime end;
    bool collided;
  };
  struct Cca {
    NodeId node;
    SymbolTime window_start;
    bool busy;
  };
  struct Beacon {
    SymbolTime start;
    BeaconBody body;
  };

  void on_transmission_start(const phy::Transmission& tx) override;
  void on_transmission_end(const phy::Transmission& tx) override;
  void on_cca(NodeId observer, SymbolTime window_start, phy::CcaResult result) override;

  const std::vector<Tx>& transmissions() const { return txs_; }
  const std::vector<Cca>& ccas() const { return ccas_; }
  const std::vector<Beacon>& beacons() const { return beacons_; }

 private:
  std::vector<Tx> txs_;
  std::vector<Cca> ccas_;
  std::vector<Beacon> beacons_;
};

/// One coordinator at the origin and n devices, wired to a shared channel.
/// Node 0 is the coordinator; devices are 1..n.
class Network {
 public:
  explicit Network(const RunParams& params, std::ostream* trace = nullptr);

  Network(const Network&) = delete;
  Network& operator=(const Network&) = delete;

  /// Starts all nodes and runs to sim_time_s.
  void run();

  const RunParams& params() const { return params_; }
  Simulator& sim() { return sim_; }
  phy::Channel& channel() { return channel_; }
  const metrics::Counters& counters() const { return counters_; }
  node::Coordinator& coordinator() { return *coordinator_; }
  node::Device& device(int k) { return *devices_.at(static_cast<std::size_t>(k - 1)); }
  int device_count() const { return static_cast<int>(devices_.size()); }
  const ChannelLog& log() const { return log_; }
  SymbolTime end_time() const { return end_; }

  metrics::MetricsReport report() const;

 private:
  RunParams params_;
  SymbolTime end_;
  Simulator sim_;
  phy::Channel channel_;
  TraceSink trace_;
  metrics::Counters counters_;
  metrics::CollisionMonitor monitor_;
  ChannelLog log_;
  std::unique_ptr<node::Coordinator> coordinator_;
  std::vector<std::unique_ptr<node::Device>> devices_;
};

}  // namespace lrwpan
