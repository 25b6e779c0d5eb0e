#include <cstdio>

#include "lrwpan/check.hpp"
#include "lrwpan/mac.hpp"

namespace lrwpan::mac {

namespace {

std::string_view to_string(GtsDenial d) {
  switch (d) {
    case GtsDenial::kTableFull:
      return "table full";
    case GtsDenial::kCapTooShort:
      return "cap too short";
    case GtsDenial::kInvalidLength:
      return "invalid length";
  }
  return "unknown";
}

}  // namespace

CoordinatorMac::CoordinatorMac(MacContext ctx, NodeId id, Options options)
    : MacBase(ctx, id), options_(options), gts_table_(options.superframe) {
  options_.superframe.validate();
  bsn_ = static_cast<std::uint8_t>(ctx.sim.uniform_int(0, 255, id));
  set_csma_params(CsmaParams{kMinBe, kMaxBe, kMaxCsmaBackoffs,
                             options_.superframe.battery_life_extension});
}

void CoordinatorMac::start(SymbolTime first_beacon) {
  sim().schedule_at(first_beacon, id(), "mac.beacon", [this] { beacon_event(); });
}

Frame CoordinatorMac::build_beacon() {
  Frame f;
  f.src = address();
  f.dst = kBroadcastAddress;
  f.seq = bsn_;
  BeaconBody body;
  body.superframe.beacon_order = options_.superframe.beacon_order;
  body.superframe.superframe_order = options_.superframe.superframe_order;
  body.superframe.final_cap_slot = gts_table_.final_cap_slot();
  body.superframe.battery_life_extension = options_.superframe.battery_life_extension;
  body.superframe.pan_coordinator = true;
  body.superframe.association_permit = options_.association_permit;
  body.gts_permit = options_.gts_permit;
  body.gts_list = gts_table_.descriptors();
  f.body = std::move(body);
  return f;
}

void CoordinatorMac::beacon_event() {
  const SuperframeConfig& cfg = options_.superframe;
  set_active(true);
  const Frame beacon = build_beacon();
  ++bsn_;
  timeline_ = superframe_timeline(cfg, now(), airtime(beacon.size_bytes()),
                                  gts_table_.final_cap_slot());
  transmit_raw(beacon);
  ++beacons_sent_;

  sim().schedule_in(cfg.beacon_interval(), id(), "mac.beacon", [this] { beacon_event(); });
  if (cfg.superframe_order < cfg.beacon_order) {
    sim().schedule_at(timeline_->active_end(), id(), "mac.sleep", [this] { set_active(false); });
  }
  for (const auto& d : gts_table_.descriptors()) {
    if (d.direction != GtsDirection::kReceive) {
      continue;
    }
    auto it = downlink_.find(d.dev_addr);
    if (it != downlink_.end()) {
      it->second->open_window(timeline_->gts_interval(d));
    }
  }
}

void CoordinatorMac::on_raw_tx_done(const Frame& frame) {
  if (frame.kind() == FrameKind::kBeacon) {
    trace("beacon transmission successful [channel:11] [PAN_ID:0] [CoordAddr:0]");
    cap_resume();
    cap_pump();
  }
}

std::optional<CapWindow> CoordinatorMac::current_cap() const {
  if (!timeline_ || now() < timeline_->start || now() >= timeline_->cap.end) {
    return std::nullopt;
  }
  return CapWindow{timeline_->start, timeline_->cap.begin, timeline_->cap.end};
}

bool CoordinatorMac::pending_data_for(Address dst) const {
  return pending_responses_.count(dst) != 0;
}

void CoordinatorMac::handle_frame(const Frame& frame) {
  char buf[96];
  switch (frame.kind()) {
    case FrameKind::kAssocRequest: {
      pending_responses_[frame.src] =
          options_.association_permit ? AssocStatus::kSuccess : AssocStatus::kAccessDenied;
      std::snprintf(buf, sizeof buf, "association request received from node %u",
                    unsigned{frame.src});
      trace(buf);
      break;
    }
    case FrameKind::kDataRequest: {
      auto it = pending_responses_.find(frame.src);
      if (it == pending_responses_.end()) {
        break;
      }
      Frame resp;
      resp.src = address();
      resp.dst = frame.src;
      resp.seq = next_seq();
      resp.ack_request = true;
      resp.body = AssocResponseBody{frame.src, it->second};
      if (it->second == AssocStatus::kSuccess) {
        associated_.insert(frame.src);
      }
      pending_responses_.erase(it);
      submit_cap(std::move(resp), nullptr);
      break;
    }
    case FrameKind::kGtsRequest:
      handle_gts_request(frame);
      break;
    case FrameKind::kData:
      if (accept_data(frame) && data_sink_) {
        data_sink_(frame);
      }
      break;
    default:
      break;
  }
}

void CoordinatorMac::handle_gts_request(const Frame& frame) {
  const GtsCharacteristics c = std::get<GtsRequestBody>(frame.body).characteristics;
  char buf[128];
  if (!c.allocate) {
    gts_table_.deallocate(frame.src, c.direction);
    std::snprintf(buf, sizeof buf, "gts deallocated devAddr:%u FinCAP:%d", unsigned{frame.src},
                  gts_table_.final_cap_slot());
    trace(buf);
    return;
  }
  if (!options_.gts_permit) {
    std::snprintf(buf, sizeof buf, "gts request denied devAddr:%u reason:not permitted",
                  unsigned{frame.src});
    trace(buf);
    return;
  }
  const GtsAllocation a = gts_table_.allocate(frame.src, c.length, c.direction);
  if (a.granted()) {
    const GtsDescriptor& d = *a.descriptor;
    std::snprintf(buf, sizeof buf,
                  "gts allocated devAddr:%u gtsCount:%zu slotStart:%d length:%d dir:%d FinCAP:%d",
                  unsigned{d.dev_addr}, gts_table_.descriptors().size(), d.start_slot, d.length,
                  static_cast<int>(d.direction), gts_table_.final_cap_slot());
  } else {
    std::snprintf(buf, sizeof buf, "gts request denied devAddr:%u reason:%s",
                  unsigned{frame.src}, std::string(to_string(a.denial)).c_str());
  }
  trace(buf);
}

MacBase::GtsEngine& CoordinatorMac::downlink_engine(Address dev) {
  auto& slot = downlink_[dev];
  if (!slot) {
    slot = std::make_unique<GtsEngine>(*this);
  }
  return *slot;
}

void CoordinatorMac::send_downlink(Address dev, std::size_t payload_len, TxCallback done) {
  GtsEngine& engine = downlink_engine(dev);
  if (timeline_) {
    if (auto d = gts_table_.find(dev, GtsDirection::kReceive)) {
      engine.open_window(timeline_->gts_interval(*d));
    }
  }
  submit_gts(engine, make_data_frame(address(), dev, next_seq(), payload_len), std::move(done));
}

bool CoordinatorMac::on_extra_ack(std::uint8_t seq) {
  for (auto& [dev, engine] : downlink_) {
    if (engine->on_ack(seq)) {
      return true;
    }
  }
  return false;
}

}  // namespace lrwpan::mac
