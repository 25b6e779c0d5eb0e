#pragma once

#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>

#include "lrwpan/csma.hpp"
#include "lrwpan/frame.hpp"
#include "lrwpan/gts.hpp"
#include "lrwpan/metrics.hpp"
#include "lrwpan/phy.hpp"
#include "lrwpan/simulator.hpp"
#include "lrwpan/superframe.hpp"
#include "lrwpan/trace.hpp"

namespace lrwpan::mac {

enum class TxStatus { kSuccess, kChannelAccessFailure, kNoAck, kAborted };
enum class TxPath { kCap, kGts };

std::string_view to_string(TxStatus status);

using TxCallback = std::function<void(TxStatus)>;

/// Per-simulation services shared by every MAC instance.
struct MacContext {
  Simulator& sim;
  phy::Channel& channel;
  TraceSink& trace;
  metrics::Counters& counters;
};

/// Machinery common to coordinator and device: frame transmission, the
/// acknowledged CAP path over slotted CSMA/CA, the contention-free GTS
/// path, acknowledgment generation, and radio power state.
class MacBase {
 public:
  MacBase(MacContext ctx, NodeId id);
  virtual ~MacBase() = default;

  MacBase(const MacBase&) = delete;
  MacBase& operator=(const MacBase&) = delete;

  NodeId id() const { return id_; }
  Address address() const { return id_; }

  /// MCPS-DATA.request for an acknowledged data frame.
  void submit_data(Address dst, std::size_t payload_len, TxPath path, TxCallback done);

  /// Restricts CSMA to the given parameters (tests use this to pin BE).
  void set_csma_params(CsmaParams params);
  void set_csma_observer(std::function<void(const CsmaStep&)> observer) {
    csma_.set_step_observer(std::move(observer));
  }

  bool cap_idle() const { return !cap_current_ && cap_queue_.empty(); }
  std::size_t cap_backlog() const { return cap_queue_.size() + (cap_current_ ? 1 : 0); }

 protected:
  struct Pending {
    Frame frame;
    TxCallback done;
    int attempts = 0;
  };

  /// Contention-free transmissions inside one GTS per superframe.
  class GtsEngine {
   public:
    explicit GtsEngine(MacBase& mac) : mac_(mac) {}

    void submit(Pending p);
    /// Makes `window` usable for this superframe.
    void open_window(Interval window);
    void on_tx_done();
    bool on_ack(std::uint8_t seq);
    /// Fails every queued and in-flight frame with kAborted.
    void abort_all();
    bool idle() const { return !current_ && queue_.empty(); }
    bool transmitting() const { return in_flight_; }

   private:
    void pump();
    void finish(TxStatus status);

    MacBase& mac_;
    std::deque<Pending> queue_;
    std::optional<Pending> current_;
    bool in_flight_ = false;
    bool awaiting_ack_ = false;
    std::optional<Interval> window_;
    SymbolTime ready_at_;
    EventHandle ack_timer_;
    EventHandle pump_event_;
  };

  // Role hooks.
  virtual std::optional<CapWindow> current_cap() const = 0;
  virtual bool cap_allowed(const Frame& frame) const = 0;
  virtual void handle_beacon(const Frame& beacon) = 0;
  /// Intact frames addressed to this node, after the ACK has been scheduled.
  virtual void handle_frame(const Frame& frame) = 0;
  virtual bool pending_data_for(Address /*dst*/) const { return false; }
  /// Transmission of a frame sent by `transmit_raw` finished.
  virtual void on_raw_tx_done(const Frame& /*frame*/) {}
  /// Offers an acknowledgment to role-specific engines.
  virtual bool on_extra_ack(std::uint8_t /*seq*/) { return false; }

  Simulator& sim() { return ctx_.sim; }
  const Simulator& sim() const { return ctx_.sim; }
  phy::Channel& channel() { return ctx_.channel; }
  metrics::Counters& counters() { return ctx_.counters; }
  void trace(std::string_view event);
  SymbolTime now() const { return ctx_.sim.now(); }

  std::uint8_t next_seq() { return dsn_++; }

  /// Counts an intact data frame unless it repeats the last sequence
  /// number seen from its source. Returns false for duplicates.
  bool accept_data(const Frame& frame);

  /// Queues a frame on the CAP path. Frames wait while cap_allowed() is false.
  void submit_cap(Frame frame, TxCallback done);
  void submit_gts(GtsEngine& engine, Frame frame, TxCallback done);
  void cap_pump();
  void cap_resume() { csma_.resume(); }
  /// Fails every CAP frame with kAborted.
  void cap_abort_all();

  /// Sends without CSMA (beacons). The radio must be free.
  void transmit_raw(const Frame& frame);

  /// Active portion: RX_ON when idle. Inactive: TRX_OFF.
  void set_active(bool active);
  bool active() const { return active_; }

  GtsEngine& gts_engine() { return gts_; }

 private:
  enum class TxOwner { kNone, kCap, kGts, kAck, kRaw };

  void transmit(const Frame& frame, TxOwner owner, GtsEngine* engine = nullptr);
  void restore_radio();
  void on_phy_tx_done(const Frame& frame);
  void on_phy_receive(const Frame& frame);
  void send_ack(const Frame& for_frame);

  void cap_start_attempt();
  void cap_on_tx_done();
  void cap_finish(TxStatus status);

  MacContext ctx_;
  NodeId id_;
  std::uint8_t dsn_;
  bool active_ = false;

  TxOwner tx_owner_ = TxOwner::kNone;
  GtsEngine* tx_engine_ = nullptr;

  SlottedCsma csma_;
  std::deque<Pending> cap_queue_;
  std::optional<Pending> cap_current_;
  bool cap_awaiting_ack_ = false;
  EventHandle cap_ack_timer_;
  SymbolTime cap_ready_at_;
  EventHandle cap_pump_event_;

  GtsEngine gts_;
  std::map<Address, std::uint8_t> last_data_seq_;

  friend class GtsEngine;
  friend class CoordinatorMac;
};

/// PAN coordinator: periodic beacons, association service, GTS allocation
/// and the receiving end of data traffic.
class CoordinatorMac : public MacBase {
 public:
  struct Options {
    SuperframeConfig superframe;
    bool gts_permit = true;
    bool association_permit = true;
  };

  CoordinatorMac(MacContext ctx, NodeId id, Options options);

  /// Beacons at start, start + BI, start + 2 BI, ...
  void start(SymbolTime first_beacon);

  /// The beacon that would be sent now.
  Frame build_beacon();

  /// Queues downlink data for a device holding a receive-direction GTS.
  void send_downlink(Address dev, std::size_t payload_len, TxCallback done);

  const GtsTable& gts_table() const { return gts_table_; }
  const std::set<Address>& associated() const { return associated_; }
  std::uint64_t beacons_sent() const { return beacons_sent_; }
  const SuperframeConfig& superframe() const { return options_.superframe; }
  std::optional<SuperframeTimeline> timeline() const { return timeline_; }

  /// Called with every data frame accepted (non-duplicate).
  void set_data_sink(std::function<void(const Frame&)> sink) { data_sink_ = std::move(sink); }

 protected:
  std::optional<CapWindow> current_cap() const override;
  bool cap_allowed(const Frame&) const override { return true; }
  void handle_beacon(const Frame&) override {}
  void handle_frame(const Frame& frame) override;
  bool pending_data_for(Address dst) const override;
  void on_raw_tx_done(const Frame& frame) override;
  bool on_extra_ack(std::uint8_t seq) override;

 private:
  void beacon_event();
  void handle_gts_request(const Frame& frame);
  GtsEngine& downlink_engine(Address dev);

  Options options_;
  GtsTable gts_table_;
  std::uint8_t bsn_ = 0;
  std::optional<SuperframeTimeline> timeline_;
  std::set<Address> associated_;
  std::map<Address, AssocStatus> pending_responses_;
  std::map<Address, std::unique_ptr<GtsEngine>> downlink_;
  std::function<void(const Frame&)> data_sink_;
  std::uint64_t beacons_sent_ = 0;
};

enum class AssociationFailure {
  kNoCoordinator,
  kNotPermitted,
  kChannelAccessFailure,
  kNoAck,
  kNoResponse,
  kDenied,
};
std::string_view to_string(AssociationFailure reason);

enum class GtsResult { kConfirmed, kDenied, kNoAck, kChannelAccessFailure };
std::string_view to_string(GtsResult result);

/// End device: passive scan, association ladder, beacon tracking with
/// orphan detection, GTS request and use.
class DeviceMac : public MacBase {
 public:
  struct Callbacks {
    std::function<void(std::optional<AssociationFailure>)> on_associate;
    std::function<void(GtsResult, std::optional<GtsDescriptor>)> on_gts;
    std::function<void()> on_gts_lost;
    std::function<void()> on_orphan;
    std::function<void(const Frame&)> on_data;
  };

  enum class State {
    kIdle,
    kScanning,
    kAwaitAssocAck,
    kResponseWait,
    kAwaitDataRequestAck,
    kAwaitAssocResponse,
    kAssociated,
  };
  enum class GtsState { kNone, kRequested, kAwaitDescriptor, kConfirmed, kReleasing };

  DeviceMac(MacContext ctx, NodeId id, int scan_exponent = 6);

  void set_callbacks(Callbacks cb) { callbacks_ = std::move(cb); }

  /// Passive scan followed by the association exchange.
  void mlme_associate();
  /// Requires association.
  void mlme_gts_request(int length, GtsDirection direction);
  void mlme_gts_deallocate();

  State state() const { return state_; }
  bool associated() const { return state_ == State::kAssociated; }
  GtsState gts_state() const { return gts_state_; }
  std::optional<GtsDescriptor> gts() const {
    return gts_state_ == GtsState::kConfirmed ? gts_ : std::nullopt;
  }
  bool has_transmit_gts() const {
    return gts_state_ == GtsState::kConfirmed && gts_ &&
           gts_->direction == GtsDirection::kTransmit;
  }
  int lost_beacons() const { return lost_beacons_; }
  std::optional<SuperframeConfig> superframe() const { return superframe_; }
  std::optional<SuperframeTimeline> timeline() const { return timeline_; }
  std::uint64_t beacons_received() const { return beacons_received_; }

 protected:
  std::optional<CapWindow> current_cap() const override;
  bool cap_allowed(const Frame& frame) const override;
  void handle_beacon(const Frame& beacon) override;
  void handle_frame(const Frame& frame) override;

 private:
  void sync_to(const Frame& beacon, SymbolTime start);
  void schedule_tracking(SymbolTime expected_start, Symbols sd, Symbols bi);
  void beacon_missed();
  void orphan();
  void update_gts(const BeaconBody& beacon);
  void gts_opportunity_missed();
  void fail_gts(GtsResult result, std::string_view why);
  void fail_association(AssociationFailure reason);
  void on_assoc_request_done(TxStatus status);
  void send_data_request();
  void on_data_request_done(TxStatus status);
  void cancel_timers();

  int scan_exponent_;
  Callbacks callbacks_;
  State state_ = State::kIdle;
  GtsState gts_state_ = GtsState::kNone;
  GtsCharacteristics gts_request_;
  std::optional<GtsDescriptor> gts_;
  int gts_wait_ = 0;
  bool saw_nonpermitting_ = false;
  Address coordinator_ = kCoordinatorAddress;

  std::optional<SuperframeConfig> superframe_;
  std::optional<SuperframeTimeline> timeline_;
  SymbolTime expected_beacon_;
  int lost_beacons_ = 0;
  std::uint64_t beacons_received_ = 0;
  bool tracking_ = false;

  EventHandle scan_timer_;
  EventHandle response_timer_;
  EventHandle sleep_event_;
  EventHandle wake_event_;
  EventHandle missed_event_;
};

}  // namespace lrwpan::mac
