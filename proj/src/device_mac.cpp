#include <cstdio>

#include "lrwpan/check.hpp"
#include "lrwpan/mac.hpp"

namespace lrwpan::mac {

namespace {

// How long after the expected beacon start a device waits before
// declaring the beacon lost. Longer than the largest beacon's air time.
constexpr Symbols kBeaconLossGrace = 100;

// Receivers come out of the inactive portion this long before the beacon
// so the radio is listening when its first symbol arrives.
constexpr Symbols kWakeLead = kUnitBackoffPeriod;

constexpr const char* kCoordTag = "[channel:11] [PAN_ID:0] [CoordAddr:0]";

}  // namespace

std::string_view to_string(AssociationFailure reason) {
  switch (reason) {
    case AssociationFailure::kNoCoordinator:
      return "no coordinator";
    case AssociationFailure::kNotPermitted:
      return "association not permitted";
    case AssociationFailure::kChannelAccessFailure:
      return "channel access failure";
    case AssociationFailure::kNoAck:
      return "ack not received";
    case AssociationFailure::kNoResponse:
      return "association response not received";
    case AssociationFailure::kDenied:
      return "association not granted";
  }
  return "unknown";
}

std::string_view to_string(GtsResult result) {
  switch (result) {
    case GtsResult::kConfirmed:
      return "confirmed";
    case GtsResult::kDenied:
      return "denied";
    case GtsResult::kNoAck:
      return "no ack";
    case GtsResult::kChannelAccessFailure:
      return "channel access failure";
  }
  return "unknown";
}

DeviceMac::DeviceMac(MacContext ctx, NodeId id, int scan_exponent)
    : MacBase(ctx, id), scan_exponent_(scan_exponent) {}

void DeviceMac::cancel_timers() {
  sim().cancel(scan_timer_);
  sim().cancel(response_timer_);
  sim().cancel(sleep_event_);
  sim().cancel(wake_event_);
  sim().cancel(missed_event_);
}

// ---------------------------------------------------------------------------
// Association

void DeviceMac::mlme_associate() {
  LRWPAN_CHECK(state_ == State::kIdle, "association requested while not idle");
  state_ = State::kScanning;
  saw_nonpermitting_ = false;
  set_active(true);
  trace("scanning channel 11");
  const Symbols scan = kBaseSuperframeDuration * ((Symbols{1} << scan_exponent_) + 1);
  scan_timer_ = sim().schedule_in(scan, id(), "mac.scan_end", [this] {
    scan_timer_ = EventHandle{};
    fail_association(saw_nonpermitting_ ? AssociationFailure::kNotPermitted
                                        : AssociationFailure::kNoCoordinator);
  });
}

void DeviceMac::fail_association(AssociationFailure reason) {
  trace("association fails (" + std::string(to_string(reason)) + ")");
  cancel_timers();
  tracking_ = false;
  timeline_.reset();
  state_ = State::kIdle;
  gts_state_ = GtsState::kNone;
  cap_abort_all();
  set_active(false);
  if (callbacks_.on_associate) {
    callbacks_.on_associate(reason);
  }
}

void DeviceMac::on_assoc_request_done(TxStatus status) {
  if (state_ != State::kAwaitAssocAck) {
    return;
  }
  switch (status) {
    case TxStatus::kSuccess:
      trace("ack for association request command received");
      state_ = State::kResponseWait;
      response_timer_ = sim().schedule_in(kResponseWaitTime, id(), "mac.response_wait",
                                          [this] { send_data_request(); });
      break;
    case TxStatus::kChannelAccessFailure:
      fail_association(AssociationFailure::kChannelAccessFailure);
      break;
    case TxStatus::kNoAck:
      fail_association(AssociationFailure::kNoAck);
      break;
    case TxStatus::kAborted:
      break;
  }
}

void DeviceMac::send_data_request() {
  response_timer_ = EventHandle{};
  state_ = State::kAwaitDataRequestAck;
  Frame req;
  req.src = address();
  req.dst = coordinator_;
  req.seq = next_seq();
  req.ack_request = true;
  req.body = DataRequestBody{};
  submit_cap(std::move(req), [this](TxStatus s) { on_data_request_done(s); });
}

void DeviceMac::on_data_request_done(TxStatus status) {
  if (state_ != State::kAwaitDataRequestAck) {
    return;
  }
  switch (status) {
    case TxStatus::kSuccess:
      trace("ack for data request command received");
      state_ = State::kAwaitAssocResponse;
      response_timer_ = sim().schedule_in(kResponseWaitTime, id(), "mac.response_timeout", [this] {
        response_timer_ = EventHandle{};
        fail_association(AssociationFailure::kNoResponse);
      });
      break;
    case TxStatus::kChannelAccessFailure:
      fail_association(AssociationFailure::kChannelAccessFailure);
      break;
    case TxStatus::kNoAck:
      fail_association(AssociationFailure::kNoAck);
      break;
    case TxStatus::kAborted:
      break;
  }
}

bool DeviceMac::cap_allowed(const Frame& frame) const {
  return state_ == State::kAssociated || frame.kind() == FrameKind::kAssocRequest ||
         frame.kind() == FrameKind::kDataRequest;
}

void DeviceMac::handle_frame(const Frame& frame) {
  switch (frame.kind()) {
    case FrameKind::kAssocResponse: {
      if (state_ != State::kAwaitAssocResponse && state_ != State::kAwaitDataRequestAck &&
          state_ != State::kResponseWait) {
        return;
      }
      sim().cancel(response_timer_);
      trace("association response command received");
      const auto& body = std::get<AssocResponseBody>(frame.body);
      if (body.status != AssocStatus::kSuccess) {
        fail_association(AssociationFailure::kDenied);
        return;
      }
      state_ = State::kAssociated;
      trace(std::string("association successful (beacon enabled) ") + kCoordTag);
      trace("begin to synchronize with the coordinator");
      if (callbacks_.on_associate) {
        callbacks_.on_associate(std::nullopt);
      }
      cap_pump();
      break;
    }
    case FrameKind::kData:
      if (accept_data(frame) && callbacks_.on_data) {
        callbacks_.on_data(frame);
      }
      break;
    default:
      break;
  }
}

// ---------------------------------------------------------------------------
// Beacon tracking

std::optional<CapWindow> DeviceMac::current_cap() const {
  if (!tracking_ || !timeline_ || now() < timeline_->start || now() >= timeline_->cap.end) {
    return std::nullopt;
  }
  return CapWindow{timeline_->start, timeline_->cap.begin, timeline_->cap.end};
}

void DeviceMac::handle_beacon(const Frame& beacon) {
  const auto& body = std::get<BeaconBody>(beacon.body);
  const SymbolTime start(now().symbols() - airtime(beacon.size_bytes()));
  switch (state_) {
    case State::kIdle:
      return;
    case State::kScanning: {
      if (!body.superframe.association_permit) {
        saw_nonpermitting_ = true;
        return;
      }
      sim().cancel(scan_timer_);
      coordinator_ = beacon.src;
      sync_to(beacon, start);
      state_ = State::kAwaitAssocAck;
      trace(std::string("sending association request to ") + kCoordTag + " ...");
      Frame req;
      req.src = address();
      req.dst = coordinator_;
      req.seq = next_seq();
      req.ack_request = true;
      req.body = AssocRequestBody{};
      submit_cap(std::move(req), [this](TxStatus s) { on_assoc_request_done(s); });
      return;
    }
    default:
      if (beacon.src == coordinator_) {
        sync_to(beacon, start);
      }
      return;
  }
}

void DeviceMac::sync_to(const Frame& beacon, SymbolTime start) {
  const auto& body = std::get<BeaconBody>(beacon.body);
  ++beacons_received_;
  lost_beacons_ = 0;
  SuperframeConfig cfg;
  cfg.beacon_order = body.superframe.beacon_order;
  cfg.superframe_order = body.superframe.superframe_order;
  cfg.battery_life_extension = body.superframe.battery_life_extension;
  if (!superframe_ || superframe_->battery_life_extension != cfg.battery_life_extension) {
    if (cap_idle()) {
      set_csma_params(CsmaParams{kMinBe, kMaxBe, kMaxCsmaBackoffs, cfg.battery_life_extension});
    }
  }
  superframe_ = cfg;
  timeline_ = superframe_timeline(cfg, start, airtime(beacon.size_bytes()),
                                  body.superframe.final_cap_slot);
  tracking_ = true;
  set_active(true);
  schedule_tracking(start, cfg.superframe_duration(), cfg.beacon_interval());
  if (state_ == State::kAssociated) {
    update_gts(body);
  }
  cap_resume();
  cap_pump();
}

void DeviceMac::schedule_tracking(SymbolTime expected_start, Symbols sd, Symbols bi) {
  sim().cancel(sleep_event_);
  sim().cancel(wake_event_);
  sim().cancel(missed_event_);
  expected_beacon_ = expected_start + bi;
  if (sd < bi) {
    sleep_event_ = sim().schedule_at(expected_start + sd, id(), "mac.sleep", [this] {
      sleep_event_ = EventHandle{};
      set_active(false);
    });
    wake_event_ = sim().schedule_at(SymbolTime(expected_beacon_.symbols() - kWakeLead), id(), "mac.wake", [this] {
      wake_event_ = EventHandle{};
      set_active(true);
    });
  }
  missed_event_ = sim().schedule_at(expected_beacon_ + kBeaconLossGrace, id(), "mac.beacon_check",
                                    [this] {
                                      missed_event_ = EventHandle{};
                                      beacon_missed();
                                    });
}

void DeviceMac::beacon_missed() {
  ++lost_beacons_;
  trace("beacon lost (" + std::to_string(lost_beacons_) + " consecutive)");
  if (gts_state_ == GtsState::kAwaitDescriptor) {
    gts_opportunity_missed();
  }
  if (lost_beacons_ >= kMaxLostBeacons) {
    if (state_ == State::kAssociated) {
      orphan();
    } else {
      fail_association(AssociationFailure::kNoCoordinator);
    }
    return;
  }
  set_active(true);
  schedule_tracking(expected_beacon_, superframe_->superframe_duration(),
                    superframe_->beacon_interval());
}

void DeviceMac::orphan() {
  trace("beacon lost " + std::to_string(lost_beacons_) + " times, node orphaned");
  cancel_timers();
  tracking_ = false;
  timeline_.reset();
  state_ = State::kIdle;
  gts_state_ = GtsState::kNone;
  gts_.reset();
  cap_abort_all();
  gts_engine().abort_all();
  set_active(false);
  if (callbacks_.on_orphan) {
    callbacks_.on_orphan();
  }
}

// ---------------------------------------------------------------------------
// GTS

void DeviceMac::mlme_gts_request(int length, GtsDirection direction) {
  LRWPAN_CHECK(state_ == State::kAssociated, "GTS request before association");
  gts_request_ = GtsCharacteristics{length, direction, true};
  gts_state_ = GtsState::kRequested;
  gts_wait_ = 0;
  Frame req;
  req.src = address();
  req.dst = coordinator_;
  req.seq = next_seq();
  req.ack_request = true;
  req.body = GtsRequestBody{gts_request_};
  submit_cap(std::move(req), [this](TxStatus s) {
    if (gts_state_ != GtsState::kRequested) {
      return;
    }
    switch (s) {
      case TxStatus::kSuccess:
        trace("ack for gts request command received");
        gts_state_ = GtsState::kAwaitDescriptor;
        break;
      case TxStatus::kNoAck:
        fail_gts(GtsResult::kNoAck, "ack not received");
        break;
      case TxStatus::kChannelAccessFailure:
        fail_gts(GtsResult::kChannelAccessFailure, "channel access failure");
        break;
      case TxStatus::kAborted:
        break;
    }
  });
}

void DeviceMac::mlme_gts_deallocate() {
  if (gts_state_ != GtsState::kConfirmed || !gts_) {
    return;
  }
  gts_state_ = GtsState::kReleasing;
  gts_engine().abort_all();
  Frame req;
  req.src = address();
  req.dst = coordinator_;
  req.seq = next_seq();
  req.ack_request = true;
  req.body = GtsRequestBody{GtsCharacteristics{gts_->length, gts_->direction, false}};
  submit_cap(std::move(req), [this](TxStatus) {
    if (gts_state_ == GtsState::kReleasing) {
      gts_state_ = GtsState::kNone;
      gts_.reset();
    }
  });
}

void DeviceMac::fail_gts(GtsResult result, std::string_view why) {
  gts_state_ = GtsState::kNone;
  trace("gts fails (" + std::string(why) + ")");
  if (callbacks_.on_gts) {
    callbacks_.on_gts(result, std::nullopt);
  }
}

void DeviceMac::gts_opportunity_missed() {
  if (++gts_wait_ >= kGtsDescPersistenceTime) {
    fail_gts(GtsResult::kDenied, "descriptor not received");
  }
}

void DeviceMac::update_gts(const BeaconBody& beacon) {
  std::optional<GtsDescriptor> mine;
  for (const auto& d : beacon.gts_list) {
    if (d.dev_addr == address() && d.direction == gts_request_.direction) {
      mine = d;
    }
  }
  switch (gts_state_) {
    case GtsState::kAwaitDescriptor: {
      if (!mine) {
        gts_opportunity_missed();
        return;
      }
      char buf[128];
      std::snprintf(buf, sizeof buf,
                    "gts descriptor received devAddr:%u slotStart:%d length:%d dir:%d FinCAP:%d",
                    unsigned{mine->dev_addr}, mine->start_slot, mine->length,
                    static_cast<int>(mine->direction), beacon.superframe.final_cap_slot);
      trace(buf);
      trace("gts confirm success received");
      gts_ = mine;
      gts_state_ = GtsState::kConfirmed;
      if (mine->direction == GtsDirection::kTransmit) {
        gts_engine().open_window(timeline_->gts_interval(*mine));
      }
      if (callbacks_.on_gts) {
        callbacks_.on_gts(GtsResult::kConfirmed, mine);
      }
      return;
    }
    case GtsState::kConfirmed:
      if (!mine) {
        trace("gts descriptor no longer listed");
        gts_state_ = GtsState::kNone;
        gts_.reset();
        gts_engine().abort_all();
        if (callbacks_.on_gts_lost) {
          callbacks_.on_gts_lost();
        }
        return;
      }
      gts_ = mine;
      if (mine->direction == GtsDirection::kTransmit) {
        gts_engine().open_window(timeline_->gts_interval(*mine));
      }
      return;
    case GtsState::kReleasing:
      if (!mine) {
        gts_state_ = GtsState::kNone;
        gts_.reset();
      }
      return;
    default:
      return;
  }
}

}  // namespace lrwpan::mac
