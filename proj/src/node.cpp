#include "lrwpan/node.hpp"

#include <cstdio>

#include "lrwpan/check.hpp"

namespace lrwpan::node {

using mac::GtsResult;
using mac::TxPath;
using mac::TxStatus;

CbrSource::CbrSource(Simulator& sim, NodeId owner, CbrConfig cfg, std::function<void()> on_packet)
    : sim_(sim), owner_(owner), cfg_(cfg), on_packet_(std::move(on_packet)) {
  LRWPAN_CHECK(cfg_.interval > 0, "CBR interval must be positive");
}

void CbrSource::start(SymbolTime stop) {
  stop_ = stop;
  if (cfg_.start_offset <= stop_) {
    sim_.schedule_at(cfg_.start_offset, owner_, "cbr.tick", [this] { tick(); });
  }
}

void CbrSource::tick() {
  ++generated_;
  on_packet_();
  const SymbolTime next = sim_.now() + cfg_.interval;
  if (next <= stop_) {
    sim_.schedule_at(next, owner_, "cbr.tick", [this] { tick(); });
  }
}

std::uint64_t CbrSource::expected_count(const CbrConfig& cfg, SymbolTime stop) {
  if (stop < cfg.start_offset) {
    return 0;
  }
  return (stop - cfg.start_offset) / cfg.interval + 1;
}

bool TxQueue::push(Packet p) {
  if (q_.size() >= capacity_) {
    return false;
  }
  q_.push_back(p);
  return true;
}

std::optional<Packet> TxQueue::pop() {
  if (q_.empty()) {
    return std::nullopt;
  }
  Packet p = q_.front();
  q_.pop_front();
  return p;
}

Device::Device(mac::MacContext ctx, NodeId id, DeviceOptions options)
    : ctx_(ctx),
      id_(id),
      options_(options),
      mac_(ctx, id, options.scan_exponent),
      cbr_(ctx.sim, id, options.cbr, [this] { on_packet(); }),
      queue_(options.queue_capacity) {
  mac::DeviceMac::Callbacks cb;
  cb.on_associate = [this](std::optional<mac::AssociationFailure> f) { on_associate(f); };
  cb.on_gts = [this](GtsResult r, std::optional<GtsDescriptor>) {
    if (r != GtsResult::kConfirmed) {
      cap_fallback_ = true;
      ctx_.trace.emit(ctx_.sim.now(), id_, "gts unavailable, data continues in the cap");
    }
    pump();
  };
  cb.on_gts_lost = [this] {
    cap_fallback_ = true;
    pump();
  };
  cb.on_orphan = [this] {
    ctx_.sim.schedule_in(0, id_, "node.reassociate", [this] { associate(); });
  };
  mac_.set_callbacks(std::move(cb));
}

void Device::start(SymbolTime stop) {
  ctx_.sim.schedule_at(options_.start_at, id_, "node.start", [this] { associate(); });
  if (options_.traffic) {
    cbr_.start(stop);
  }
}

void Device::associate() {
  if (mac_.state() == mac::DeviceMac::State::kIdle) {
    mac_.mlme_associate();
  }
}

void Device::on_associate(std::optional<mac::AssociationFailure> failure) {
  if (failure) {
    ctx_.sim.schedule_in(options_.association_retry, id_, "node.retry_association",
                         [this] { associate(); });
    return;
  }
  ++associations_;
  cap_fallback_ = false;
  if (options_.use_gts) {
    mac_.mlme_gts_request(options_.gts_length, options_.gts_direction);
  }
  pump();
}

void Device::on_packet() {
  ++stats_.generated;
  if (!queue_.push(Packet{next_packet_++, ctx_.sim.now()})) {
    ++stats_.queue_drops;
    ++ctx_.counters.drops(metrics::DropCause::kQueueDrop);
    ctx_.trace.emit(ctx_.sim.now(), id_, "packet dropped (queue_drop)");
    return;
  }
  pump();
}

bool Device::gts_pending() const {
  using S = mac::DeviceMac::GtsState;
  const S s = mac_.gts_state();
  return options_.use_gts && !cap_fallback_ && (s == S::kRequested || s == S::kAwaitDescriptor);
}

void Device::pump() {
  if (in_flight_ || queue_.empty() || !mac_.associated() || gts_pending()) {
    return;
  }
  const std::size_t frame_bytes = kMacHeaderBytes + options_.cbr.payload_bytes + kFcsBytes;
  TxPath path = TxPath::kCap;
  if (mac_.has_transmit_gts() && mac_.superframe() &&
      mac::gts_can_carry(mac_.gts()->length, *mac_.superframe(), frame_bytes)) {
    path = TxPath::kGts;
  }
  in_flight_ = queue_.pop();
  const Packet p = *in_flight_;
  mac_.submit_data(kCoordinatorAddress, options_.cbr.payload_bytes, path,
                   [this, path, p](TxStatus s) { on_sent(path, p, s); });
}

void Device::on_sent(TxPath path, Packet p, TxStatus status) {
  in_flight_.reset();
  switch (status) {
    case TxStatus::kSuccess:
      ++stats_.acked;
      if (path == TxPath::kGts) {
        ctx_.trace.emit(ctx_.sim.now(), id_, "gts transmit success");
      }
      break;
    case TxStatus::kChannelAccessFailure:
      ++stats_.channel_access_failures;
      ++ctx_.counters.drops(metrics::DropCause::kChannelAccessFailure);
      ctx_.trace.emit(ctx_.sim.now(), id_, "packet dropped (channel_access_failure)");
      break;
    case TxStatus::kNoAck:
      ++stats_.no_ack_exhausted;
      ++ctx_.counters.drops(metrics::DropCause::kNoAckExhausted);
      ctx_.trace.emit(ctx_.sim.now(), id_, "packet dropped (no_ack_exhausted)");
      break;
    case TxStatus::kAborted:
      queue_.push_front(p);
      break;
  }
  pump();
}

DeviceStats Device::stats() const {
  DeviceStats s = stats_;
  s.queued = queue_.size();
  s.in_flight = in_flight_ ? 1 : 0;
  return s;
}

}  // namespace lrwpan::node
