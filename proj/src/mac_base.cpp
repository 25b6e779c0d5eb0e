#include <cstdio>

#include "lrwpan/check.hpp"
#include "lrwpan/mac.hpp"

namespace lrwpan::mac {

std::string_view to_string(TxStatus status) {
  switch (status) {
    case TxStatus::kSuccess:
      return "success";
    case TxStatus::kChannelAccessFailure:
      return "channel access failure";
    case TxStatus::kNoAck:
      return "no ack";
    case TxStatus::kAborted:
      return "aborted";
  }
  return "unknown";
}

namespace {

std::string describe_send(const Frame& f) {
  char buf[96];
  switch (f.kind()) {
    case FrameKind::kData:
      std::snprintf(buf, sizeof buf, "sending data frame seq:%u dst:%u payload:%zu",
                    unsigned{f.seq}, unsigned{f.dst}, f.payload_len());
      return buf;
    case FrameKind::kGtsRequest:
      std::snprintf(buf, sizeof buf, "sending gts request command ... 0x%02x",
                    unsigned{std::get<GtsRequestBody>(f.body).characteristics.encode()});
      return buf;
    default:
      return "sending " + std::string(to_string(f.kind())) + " command ...";
  }
}

}  // namespace

MacBase::MacBase(MacContext ctx, NodeId id)
    : ctx_(ctx),
      id_(id),
      dsn_(static_cast<std::uint8_t>(ctx.sim.uniform_int(0, 255, id))),
      csma_(ctx.sim, id, CsmaParams{},
            SlottedCsma::Environment{
                [this] { return current_cap(); },
                [this] {
                  return channel().plme_cca_request(id_) == phy::PhyStatus::kIdle
                             ? phy::CcaResult::kIdle
                             : phy::CcaResult::kBusy;
                },
                [this] {
                  if (channel().is_transmitting(id_) || !cap_current_) {
                    return false;
                  }
                  transmit(cap_current_->frame, TxOwner::kCap);
                  return true;
                },
                [this] { cap_finish(TxStatus::kChannelAccessFailure); }}),
      gts_(*this) {
  channel().set_receive_handler(id_, [this](const Frame& f) { on_phy_receive(f); });
  channel().set_tx_done_handler(id_, [this](const Frame& f) { on_phy_tx_done(f); });
}

void MacBase::trace(std::string_view event) { ctx_.trace.emit(now(), id_, event); }

void MacBase::set_csma_params(CsmaParams params) { csma_.set_params(params); }

void MacBase::submit_data(Address dst, std::size_t payload_len, TxPath path, TxCallback done) {
  Frame f = make_data_frame(id_, dst, next_seq(), payload_len);
  if (path == TxPath::kCap) {
    submit_cap(std::move(f), std::move(done));
  } else {
    submit_gts(gts_, std::move(f), std::move(done));
  }
}

bool MacBase::accept_data(const Frame& frame) {
  auto [it, inserted] = last_data_seq_.try_emplace(frame.src, frame.seq);
  if (!inserted && it->second == frame.seq) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "duplicate data frame from:%u seq:%u", unsigned{frame.src},
                  unsigned{frame.seq});
    trace(buf);
    return false;
  }
  it->second = frame.seq;
  ++counters().received_data_frames;
  counters().received_data_bytes += frame.payload_len();
  if (ctx_.trace.enabled()) {
    char buf[80];
    std::snprintf(buf, sizeof buf, "data frame received from:%u seq:%u payload:%zu",
                  unsigned{frame.src}, unsigned{frame.seq}, frame.payload_len());
    trace(buf);
  }
  return true;
}

// ---------------------------------------------------------------------------
// Radio and frame plumbing

void MacBase::transmit(const Frame& frame, TxOwner owner, GtsEngine* engine) {
  LRWPAN_CHECK(!channel().is_transmitting(id_), "MAC started a second transmission");
  channel().set_trx_state(id_, phy::TrxState::kTxOn);
  const phy::PhyStatus st = channel().pd_data_request(id_, frame);
  LRWPAN_CHECK(st == phy::PhyStatus::kSuccess, "PD-DATA.request rejected");
  tx_owner_ = owner;
  tx_engine_ = engine;
  if (frame.kind() == FrameKind::kData) {
    ++counters().sent_data_frames;
  }
  if (ctx_.trace.enabled() && (frame.kind() == FrameKind::kData || frame.is_command())) {
    trace(describe_send(frame));
  }
}

void MacBase::transmit_raw(const Frame& frame) { transmit(frame, TxOwner::kRaw); }

void MacBase::restore_radio() {
  if (!channel().is_transmitting(id_)) {
    channel().set_trx_state(id_, active_ ? phy::TrxState::kRxOn : phy::TrxState::kTrxOff);
  }
}

void MacBase::set_active(bool active) {
  active_ = active;
  restore_radio();
}

void MacBase::on_phy_tx_done(const Frame& frame) {
  const TxOwner owner = tx_owner_;
  GtsEngine* engine = tx_engine_;
  tx_owner_ = TxOwner::kNone;
  tx_engine_ = nullptr;
  restore_radio();
  switch (owner) {
    case TxOwner::kCap:
      cap_on_tx_done();
      break;
    case TxOwner::kGts:
      engine->on_tx_done();
      break;
    case TxOwner::kRaw:
      on_raw_tx_done(frame);
      break;
    case TxOwner::kAck:
    case TxOwner::kNone:
      break;
  }
}

void MacBase::on_phy_receive(const Frame& frame) {
  switch (frame.kind()) {
    case FrameKind::kAck:
      if (cap_awaiting_ack_ && cap_current_ && cap_current_->frame.seq == frame.seq) {
        sim().cancel(cap_ack_timer_);
        cap_awaiting_ack_ = false;
        cap_finish(TxStatus::kSuccess);
      } else if (!gts_.on_ack(frame.seq)) {
        on_extra_ack(frame.seq);
      }
      return;
    case FrameKind::kBeacon:
      handle_beacon(frame);
      return;
    default:
      break;
  }
  if (frame.dst != address()) {
    return;
  }
  if (frame.ack_request) {
    send_ack(frame);
  }
  handle_frame(frame);
}

void MacBase::send_ack(const Frame& for_frame) {
  const Frame ack = make_ack(for_frame.seq, for_frame.src, pending_data_for(for_frame.src));
  sim().schedule_in(kTurnaroundTime, id_, "mac.ack", [this, ack] {
    if (channel().is_transmitting(id_)) {
      return;
    }
    transmit(ack, TxOwner::kAck);
  });
}

// ---------------------------------------------------------------------------
// CAP path

void MacBase::submit_cap(Frame frame, TxCallback done) {
  cap_queue_.push_back(Pending{std::move(frame), std::move(done)});
  cap_pump();
}

void MacBase::cap_pump() {
  if (cap_current_ || cap_queue_.empty()) {
    return;
  }
  if (now() < cap_ready_at_) {
    if (!cap_pump_event_.valid()) {
      cap_pump_event_ = sim().schedule_at(cap_ready_at_, id_, "mac.cap_pump", [this] {
        cap_pump_event_ = EventHandle{};
        cap_pump();
      });
    }
    return;
  }
  if (!cap_allowed(cap_queue_.front().frame)) {
    return;
  }
  cap_current_ = std::move(cap_queue_.front());
  cap_queue_.pop_front();
  cap_start_attempt();
}

void MacBase::cap_start_attempt() {
  const Frame& f = cap_current_->frame;
  const Symbols exchange = airtime(f.size_bytes()) + (f.ack_request ? kAckExchange : 0);
  csma_.start(exchange);
}

void MacBase::cap_on_tx_done() {
  if (!cap_current_) {
    return;
  }
  if (!cap_current_->frame.ack_request) {
    cap_finish(TxStatus::kSuccess);
    return;
  }
  cap_awaiting_ack_ = true;
  cap_ack_timer_ = sim().schedule_in(kAckWaitDuration, id_, "mac.ack_timeout", [this] {
    cap_ack_timer_ = EventHandle{};
    cap_awaiting_ack_ = false;
    if (++cap_current_->attempts > kMaxFrameRetries) {
      cap_finish(TxStatus::kNoAck);
    } else {
      cap_start_attempt();
    }
  });
}

void MacBase::cap_finish(TxStatus status) {
  Pending p = std::move(*cap_current_);
  cap_current_.reset();
  cap_ready_at_ = now() + ifs_after(p.frame.size_bytes());
  if (p.done) {
    p.done(status);
  }
  cap_pump();
}

void MacBase::cap_abort_all() {
  csma_.abort();
  sim().cancel(cap_ack_timer_);
  sim().cancel(cap_pump_event_);
  cap_awaiting_ack_ = false;
  if (tx_owner_ == TxOwner::kCap) {
    tx_owner_ = TxOwner::kNone;  // the frame on air no longer has an owner
  }
  std::deque<Pending> dropped;
  if (cap_current_) {
    dropped.push_back(std::move(*cap_current_));
    cap_current_.reset();
  }
  for (auto& p : cap_queue_) {
    dropped.push_back(std::move(p));
  }
  cap_queue_.clear();
  for (auto& p : dropped) {
    if (p.done) {
      p.done(TxStatus::kAborted);
    }
  }
}

// ---------------------------------------------------------------------------
// GTS path

void MacBase::submit_gts(GtsEngine& engine, Frame frame, TxCallback done) {
  engine.submit(Pending{std::move(frame), std::move(done)});
}

void MacBase::GtsEngine::submit(Pending p) {
  queue_.push_back(std::move(p));
  pump();
}

void MacBase::GtsEngine::open_window(Interval window) {
  window_ = window;
  mac_.sim().cancel(pump_event_);
  const SymbolTime at = std::max(window.begin, mac_.now());
  pump_event_ = mac_.sim().schedule_at(at, mac_.id(), "mac.gts_window", [this] {
    pump_event_ = EventHandle{};
    pump();
  });
}

void MacBase::GtsEngine::pump() {
  if (in_flight_ || awaiting_ack_) {
    return;
  }
  if (!current_) {
    if (queue_.empty()) {
      return;
    }
    current_ = std::move(queue_.front());
    queue_.pop_front();
  }
  const SymbolTime now = mac_.now();
  if (!window_ || now < window_->begin || now >= window_->end) {
    return;
  }
  if (now < ready_at_) {
    mac_.sim().cancel(pump_event_);
    pump_event_ = mac_.sim().schedule_at(ready_at_, mac_.id(), "mac.gts_pump", [this] {
      pump_event_ = EventHandle{};
      pump();
    });
    return;
  }
  const Frame& f = current_->frame;
  const Symbols need = airtime(f.size_bytes()) + (f.ack_request ? kAckExchange : 0);
  if (now + need > window_->end || mac_.channel().is_transmitting(mac_.id())) {
    return;  // held for the next window
  }
  in_flight_ = true;
  mac_.transmit(f, TxOwner::kGts, this);
}

void MacBase::GtsEngine::on_tx_done() {
  in_flight_ = false;
  if (!current_) {
    return;
  }
  if (!current_->frame.ack_request) {
    finish(TxStatus::kSuccess);
    return;
  }
  awaiting_ack_ = true;
  ack_timer_ = mac_.sim().schedule_in(kAckWaitDuration, mac_.id(), "mac.gts_ack_timeout", [this] {
    ack_timer_ = EventHandle{};
    awaiting_ack_ = false;
    if (++current_->attempts > kMaxFrameRetries) {
      finish(TxStatus::kNoAck);
    } else {
      pump();
    }
  });
}

bool MacBase::GtsEngine::on_ack(std::uint8_t seq) {
  if (!awaiting_ack_ || !current_ || current_->frame.seq != seq) {
    return false;
  }
  mac_.sim().cancel(ack_timer_);
  awaiting_ack_ = false;
  finish(TxStatus::kSuccess);
  return true;
}

void MacBase::GtsEngine::finish(TxStatus status) {
  Pending p = std::move(*current_);
  current_.reset();
  ready_at_ = mac_.now() + ifs_after(p.frame.size_bytes());
  if (p.done) {
    p.done(status);
  }
  pump();
}

void MacBase::GtsEngine::abort_all() {
  mac_.sim().cancel(ack_timer_);
  mac_.sim().cancel(pump_event_);
  awaiting_ack_ = false;
  window_.reset();
  if (in_flight_ && mac_.tx_engine_ == this) {
    mac_.tx_owner_ = TxOwner::kNone;
    mac_.tx_engine_ = nullptr;
  }
  in_flight_ = false;
  std::deque<Pending> dropped;
  if (current_) {
    dropped.push_back(std::move(*current_));
    current_.reset();
  }
  for (auto& p : queue_) {
    dropped.push_back(std::move(p));
  }
  queue_.clear();
  for (auto& p : dropped) {
    if (p.done) {
      p.done(TxStatus::kAborted);
    }
  }
}

}  // namespace lrwpan::mac
