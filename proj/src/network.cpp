#include "lrwpan/network.hpp"

#include <cmath>
#include <numbers>

namespace lrwpan {

namespace {

// RNG streams for traffic phases, disjoint from the per-node MAC streams.
constexpr NodeId kPhaseStream = 0x8000;

}  // namespace

void RunParams::validate() const {
  superframe.validate();
  if (n_devices < 1) {
    throw mac::InvalidConfig("n_devices must be at least 1");
  }
  if (n_gts_devices < 0 || n_gts_devices > n_devices) {
    throw mac::InvalidConfig("n_gts_devices must be between 0 and n_devices");
  }
  if (gts_length < 1 || gts_length > 15) {
    throw mac::InvalidConfig("gts_length must be between 1 and 15");
  }
  if (!(interval_s > 0.0)) {
    throw mac::InvalidConfig("interval_s must be positive");
  }
  if (!(sim_time_s > 0.0)) {
    throw mac::InvalidConfig("sim_time_s must be positive");
  }
  if (!(radius_m >= 0.0) || !(range_m > 0.0)) {
    throw mac::InvalidConfig("radius_m must be non-negative and range_m positive");
  }
  if (stagger_s < 0.0 || association_retry_s <= 0.0) {
    throw mac::InvalidConfig("stagger_s must be non-negative and association_retry_s positive");
  }
  if (queue_capacity < 1) {
    throw mac::InvalidConfig("queue_capacity must be at least 1");
  }
  if (payload_bytes > 114) {
    throw mac::InvalidConfig("payload_bytes exceeds the largest MAC payload (114)");
  }
  if (!positions.empty() && positions.size() != static_cast<std::size_t>(n_devices)) {
    throw mac::InvalidConfig("positions must list every device");
  }
}

double RunParams::effective_traffic_start_s() const {
  return traffic_start_s >= 0.0 ? traffic_start_s : stagger_s * (n_devices + 1);
}

phy::Position circle_position(int k, int n, double radius_m) {
  const double angle = 2.0 * std::numbers::pi * k / n;
  return {radius_m * std::cos(angle), radius_m * std::sin(angle)};
}

void ChannelLog::on_transmission_start(const phy::Transmission& tx) {
  if (tx.frame.kind() == FrameKind::kBeacon) {
    beacons_.push_back(Beacon{tx.start, std::get<BeaconBody>(tx.frame.body)});
  }
}

void ChannelLog::on_transmission_end(const phy::Transmission& tx) {
  txs_.push_back(Tx{tx.sender, tx.frame.kind(), tx.frame.dst, tx.start, tx.end,
                    metrics::CollisionMonitor::collided(tx)});
}

void ChannelLog::on_cca(NodeId observer, SymbolTime window_start, phy::CcaResult result) {
  ccas_.push_back(Cca{observer, window_start, result == phy::CcaResult::kBusy});
}

Network::Network(const RunParams& params, std::ostream* trace)
    : params_((params.validate(), params)),
      end_(SymbolTime::from_seconds(params.sim_time_s)),
      sim_(params.seed),
      channel_(sim_),
      trace_(trace),
      monitor_(counters_, trace_),
      log_() {
  channel_.add_observer(&monitor_);
  channel_.add_observer(&log_);

  const mac::MacContext ctx{sim_, channel_, trace_, counters_};
  channel_.add_radio(0, phy::RadioConfig{phy::Position{}, params_.range_m});
  mac::CoordinatorMac::Options copts;
  copts.superframe = params_.superframe;
  copts.gts_permit = params_.gts_permit;
  coordinator_ = std::make_unique<node::Coordinator>(ctx, 0, copts);

  const int n = params_.n_devices;
  const SymbolTime traffic_start = SymbolTime::from_seconds(params_.effective_traffic_start_s());
  const Symbols interval = SymbolTime::from_seconds(params_.interval_s).symbols();
  for (int k = 1; k <= n; ++k) {
    const phy::Position pos = params_.positions.empty()
                                  ? circle_position(k, n, params_.radius_m)
                                  : params_.positions[static_cast<std::size_t>(k - 1)];
    channel_.add_radio(static_cast<NodeId>(k), phy::RadioConfig{pos, params_.range_m});
    node::DeviceOptions opts;
    opts.use_gts = k <= params_.n_gts_devices;
    opts.gts_length = params_.gts_length;
    opts.gts_direction = params_.gts_direction;
    opts.start_at = SymbolTime::from_seconds(params_.stagger_s * k);
    opts.association_retry = SymbolTime::from_seconds(params_.association_retry_s).symbols();
    opts.cbr.payload_bytes = params_.payload_bytes;
    opts.cbr.interval = interval;
    // Each source gets a random phase within one interval.
    opts.cbr.start_offset =
        traffic_start + static_cast<Symbols>(sim_.uniform_int(
                            0, static_cast<std::int64_t>(interval) - 1, kPhaseStream + k));
    opts.queue_capacity = params_.queue_capacity;
    opts.scan_exponent = params_.scan_exponent;
    devices_.push_back(std::make_unique<node::Device>(ctx, static_cast<NodeId>(k), opts));
  }
}

void Network::run() {
  coordinator_->start();
  for (auto& d : devices_) {
    d->start(end_);
  }
  sim_.run_until(end_);
}

metrics::MetricsReport Network::report() const {
  return metrics::make_report(params_.superframe, params_.n_devices, params_.seed,
                              params_.sim_time_s, counters_);
}

}  // namespace lrwpan
