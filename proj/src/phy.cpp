#include "lrwpan/phy.hpp"

#include <algorithm>
#include <cmath>

#include "lrwpan/check.hpp"
#include "lrwpan/superframe.hpp"

namespace lrwpan::phy {

void Channel::add_radio(NodeId id, RadioConfig cfg) {
  LRWPAN_CHECK(id == radios_.size(), "radio ids must be dense");
  LRWPAN_CHECK(cfg.range_m > 0.0, "range must be positive");
  LRWPAN_CHECK(cfg.bitrate == kBitRate, "only the 2.4 GHz PHY is modelled");
  Radio radio;
  radio.cfg = cfg;
  radios_.push_back(std::move(radio));
}

double Channel::distance(NodeId a, NodeId b) const {
  const auto& pa = radios_.at(a).cfg.position;
  const auto& pb = radios_.at(b).cfg.position;
  return std::hypot(pa.x - pb.x, pa.y - pb.y);
}

bool Channel::in_range(NodeId a, NodeId b) const {
  if (a == b) {
    return true;
  }
  // Symmetric: a link exists when both ends reach each other.
  const double d = distance(a, b);
  return d <= radios_.at(a).cfg.range_m && d <= radios_.at(b).cfg.range_m;
}

TrxState Channel::set_trx_state(NodeId id, TrxState mode) {
  Radio& r = radios_.at(id);
  const TrxState prior = r.state;
  if (prior == mode) {
    return prior;
  }
  if (prior == TrxState::kRxOn) {
    // Switching to TX while a frame arrives is an overlap with our own
    // transmission; switching off is simply not listening.
    const RxOutcome aborted =
        mode == TrxState::kTxOn ? RxOutcome::kCorrupted : RxOutcome::kNotListening;
    for (auto& t : active_) {
      if (t->outcomes[id] == RxOutcome::kReceiving) {
        t->outcomes[id] = aborted;
      }
    }
  }
  r.state = mode;
  return prior;
}

PhyStatus Channel::pd_data_request(NodeId sender, const Frame& frame) {
  Radio& radio = radios_.at(sender);
  if (radio.state != TrxState::kTxOn) {
    return PhyStatus::kTrxStateError;
  }
  LRWPAN_CHECK(radio.current_tx == 0, "overlapping transmission by one sender");

  const SymbolTime now = sim_.now();
  auto tx = std::make_unique<Transmission>();
  tx->id = next_tx_id_++;
  tx->sender = sender;
  tx->frame = frame;
  tx->start = now;
  tx->end = now + airtime(frame.size_bytes());
  tx->outcomes.assign(radios_.size(), RxOutcome::kOutOfRange);

  for (NodeId r = 0; r < radios_.size(); ++r) {
    if (r == sender) {
      continue;
    }
    if (!in_range(sender, r)) {
      tx->outcomes[r] = RxOutcome::kOutOfRange;
      continue;
    }
    const Radio& rx = radios_[r];
    if (rx.current_tx != 0) {
      tx->outcomes[r] = RxOutcome::kCorrupted;
      continue;
    }
    if (rx.state != TrxState::kRxOn) {
      tx->outcomes[r] = RxOutcome::kNotListening;
      continue;
    }
    bool overlap = false;
    for (auto& other : active_) {
      if (other->end <= now || !in_range(other->sender, r)) {
        continue;
      }
      overlap = true;
      if (other->outcomes[r] == RxOutcome::kReceiving) {
        other->outcomes[r] = RxOutcome::kCorrupted;
      }
    }
    tx->outcomes[r] = overlap ? RxOutcome::kCorrupted : RxOutcome::kReceiving;
  }
  // The sender is deaf to anything it was receiving.
  for (auto& other : active_) {
    if (other->outcomes[sender] == RxOutcome::kReceiving) {
      other->outcomes[sender] = RxOutcome::kCorrupted;
    }
  }

  radio.current_tx = tx->id;
  const std::uint64_t id = tx->id;
  const SymbolTime end = tx->end;
  for (auto* o : observers_) {
    o->on_transmission_start(*tx);
  }
  active_.push_back(std::move(tx));
  sim_.schedule_at(end, sender, "phy.tx_end", [this, id] { finish(id); });
  return PhyStatus::kSuccess;
}

void Channel::finish(std::uint64_t tx_id) {
  auto it = std::find_if(active_.begin(), active_.end(),
                         [tx_id](const auto& t) { return t->id == tx_id; });
  LRWPAN_CHECK(it != active_.end(), "unknown transmission");
  std::unique_ptr<Transmission> tx = std::move(*it);
  active_.erase(it);

  std::vector<NodeId> deliver;
  for (NodeId r = 0; r < tx->outcomes.size(); ++r) {
    if (tx->outcomes[r] == RxOutcome::kReceiving) {
      tx->outcomes[r] = RxOutcome::kDelivered;
      deliver.push_back(r);
    }
  }
  radios_[tx->sender].current_tx = 0;
  for (auto* o : observers_) {
    o->on_transmission_end(*tx);
  }

  const Frame frame = tx->frame;
  const NodeId sender = tx->sender;
  recent_.push_back(std::move(tx));
  const SymbolTime now = sim_.now();
  while (!recent_.empty() && recent_.front()->end + 4 * mac::kCcaDuration < now) {
    recent_.pop_front();
  }

  if (radios_[sender].on_tx_done) {
    radios_[sender].on_tx_done(frame);
  }
  for (NodeId r : deliver) {
    if (radios_[r].on_receive) {
      radios_[r].on_receive(frame);
    }
  }
}

PhyStatus Channel::plme_cca_request(NodeId observer) {
  if (radios_.at(observer).state != TrxState::kRxOn) {
    return PhyStatus::kTrxStateError;
  }
  const SymbolTime now = sim_.now();
  const SymbolTime window_start(now.symbols() >= mac::kCcaDuration
                                    ? now.symbols() - mac::kCcaDuration
                                    : 0);
  auto audible = [&](const Transmission& t) {
    return t.sender != observer && in_range(t.sender, observer) && t.start < now &&
           t.end > window_start;
  };
  bool busy = false;
  for (const auto& t : active_) {
    busy = busy || audible(*t);
  }
  for (const auto& t : recent_) {
    busy = busy || audible(*t);
  }
  const CcaResult result = busy ? CcaResult::kBusy : CcaResult::kIdle;
  for (auto* o : observers_) {
    o->on_cca(observer, window_start, result);
  }
  return busy ? PhyStatus::kBusy : PhyStatus::kIdle;
}

}  // namespace lrwpan::phy
