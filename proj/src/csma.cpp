#include "lrwpan/csma.hpp"

#include <algorithm>

#include "lrwpan/check.hpp"

namespace lrwpan::mac {

SlottedCsma::SlottedCsma(Simulator& sim, NodeId node, CsmaParams params, Environment env)
    : sim_(sim), node_(node), params_(params), env_(std::move(env)) {}

void SlottedCsma::emit(CsmaStep::Kind kind, SymbolTime at, int value) {
  if (observer_) {
    observer_(CsmaStep{kind, at, value, state_});
  }
}

void SlottedCsma::set_params(CsmaParams params) {
  LRWPAN_CHECK(!active_, "CSMA parameters changed mid-run");
  params_ = params;
}

void SlottedCsma::start(Symbols exchange_length) {
  LRWPAN_CHECK(!active_, "CSMA run already in progress");
  active_ = true;
  deferred_ = false;
  exchange_length_ = exchange_length;
  state_ = CsmaState{0, 2, params_.initial_be()};
  backoff_round();
}

void SlottedCsma::resume() {
  if (active_ && deferred_) {
    deferred_ = false;
    backoff_round();
  }
}

void SlottedCsma::abort() {
  sim_.cancel(pending_);
  active_ = false;
  deferred_ = false;
}

void SlottedCsma::backoff_round() {
  const SymbolTime now = sim_.now();
  const std::optional<CapWindow> cap = env_.current_cap();
  if (!cap || now >= cap->end) {
    deferred_ = true;
    emit(CsmaStep::Kind::kDefer, now);
    return;
  }
  state_.cw = 2;
  const SymbolTime from = std::max(now, cap->begin);
  const Symbols offset = from - cap->superframe_start;
  const SymbolTime boundary =
      cap->superframe_start +
      (offset + kUnitBackoffPeriod - 1) / kUnitBackoffPeriod * kUnitBackoffPeriod;
  const int delay = static_cast<int>(sim_.uniform_int(0, (1 << state_.be) - 1, node_));
  emit(CsmaStep::Kind::kBackoff, boundary, delay);

  const SymbolTime first_cca = boundary + static_cast<Symbols>(delay) * kUnitBackoffPeriod;
  const SymbolTime done = first_cca + 2 * kUnitBackoffPeriod + exchange_length_;
  if (done > cap->end) {
    deferred_ = true;
    emit(CsmaStep::Kind::kDefer, now);
    return;
  }
  pending_ = sim_.schedule_at(first_cca + kCcaDuration, node_, "csma.cca",
                              [this, first_cca] { on_cca_done(first_cca); });
}

void SlottedCsma::on_cca_done(SymbolTime window_start) {
  pending_ = EventHandle{};
  const phy::CcaResult result = env_.cca();
  emit(CsmaStep::Kind::kCca, window_start, result == phy::CcaResult::kBusy ? 1 : 0);
  if (result == phy::CcaResult::kBusy) {
    channel_busy();
    return;
  }
  --state_.cw;
  const SymbolTime next = window_start + kUnitBackoffPeriod;
  if (state_.cw > 0) {
    pending_ = sim_.schedule_at(next + kCcaDuration, node_, "csma.cca",
                                [this, next] { on_cca_done(next); });
    return;
  }
  pending_ = sim_.schedule_at(next, node_, "csma.tx", [this] {
    pending_ = EventHandle{};
    if (!env_.transmit()) {
      channel_busy();
      return;
    }
    emit(CsmaStep::Kind::kTransmit, sim_.now());
    active_ = false;
  });
}

void SlottedCsma::channel_busy() {
  state_.cw = 2;
  ++state_.nb;
  state_.be = std::min(state_.be + 1, params_.max_be);
  if (state_.nb > params_.max_backoffs) {
    emit(CsmaStep::Kind::kFailure, sim_.now());
    active_ = false;
    if (env_.on_failure) {
      env_.on_failure();
    }
    return;
  }
  backoff_round();
}

}  // namespace lrwpan::mac
