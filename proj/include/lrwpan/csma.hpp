#pragma once

#include <functional>
#include <optional>

#include "lrwpan/phy.hpp"
#include "lrwpan/simulator.hpp"
#include "lrwpan/superframe.hpp"

namespace lrwpan::mac {

struct CsmaParams {
  int min_be = kMinBe;
  int max_be = kMaxBe;
  int max_backoffs = kMaxCsmaBackoffs;
  bool battery_life_extension = false;

  int initial_be() const { return battery_life_extension ? std::min(2, min_be) : min_be; }
};

struct CsmaState {
  int nb = 0;
  int cw = 2;
  int be = kMinBe;
  bool operator==(const CsmaState&) const = default;
};

/// The contention access period currently open to this node.
struct CapWindow {
  SymbolTime superframe_start;  // backoff boundaries are aligned here
  SymbolTime begin;             // end of the beacon
  SymbolTime end;
};

/// One decision of the slotted CSMA/CA algorithm, for tracing and for
/// comparison against a reference interpreter.
struct CsmaStep {
  enum class Kind { kBackoff, kDefer, kCca, kTransmit, kFailure };
  Kind kind;
  SymbolTime at;
  int value = 0;  // backoff periods drawn, or CCA result (1 = busy)
  CsmaState state;

  bool operator==(const CsmaStep&) const = default;
};

/// Slotted CSMA/CA for the beacon-enabled CAP.
///
/// A run starts with NB=0, CW=2 and BE=macMinBE (or min(2, macMinBE) with
/// battery life extension). Each round locates the next backoff boundary,
/// draws a delay in [0, 2^BE - 1] backoff periods and checks that delay,
/// two CCAs, the frame and its acknowledgment fit before the CAP ends. If
/// they do not, the run parks until resume() is called at the next CAP and
/// the round restarts with a fresh draw. A busy CCA resets CW to 2 and
/// bumps NB and BE; NB beyond macMaxCSMABackoffs is a channel access
/// failure. Two idle CCAs on consecutive boundaries lead to transmission
/// on the following boundary.
class SlottedCsma {
 public:
  struct Environment {
    /// CAP of the superframe in progress, if the node is synchronized and
    /// the CAP has not ended.
    std::function<std::optional<CapWindow>()> current_cap;
    /// Runs at the end of the 8-symbol CCA window.
    std::function<phy::CcaResult()> cca;
    /// Starts the transmission now; false means the radio is unavailable,
    /// which is handled like a busy channel.
    std::function<bool()> transmit;
    std::function<void()> on_failure;
  };

  SlottedCsma(Simulator& sim, NodeId node, CsmaParams params, Environment env);

  SlottedCsma(const SlottedCsma&) = delete;
  SlottedCsma& operator=(const SlottedCsma&) = delete;

  /// Begins a run for an exchange occupying `exchange_length` symbols from
  /// the transmit boundary (frame air time plus acknowledgment, if any).
  void start(Symbols exchange_length);
  /// Re-evaluates a parked run at a new CAP.
  void resume();
  void abort();

  bool active() const { return active_; }
  bool deferred() const { return deferred_; }
  const CsmaState& state() const { return state_; }
  const CsmaParams& params() const { return params_; }
  /// Only between runs.
  void set_params(CsmaParams params);

  void set_step_observer(std::function<void(const CsmaStep&)> observer) {
    observer_ = std::move(observer);
  }

 private:
  void backoff_round();
  void on_cca_done(SymbolTime window_start);
  void channel_busy();
  void emit(CsmaStep::Kind kind, SymbolTime at, int value = 0);

  Simulator& sim_;
  NodeId node_;
  CsmaParams params_;
  Environment env_;
  CsmaState state_;
  Symbols exchange_length_ = 0;
  bool active_ = false;
  bool deferred_ = false;
  EventHandle pending_;
  std::function<void(const CsmaStep&)> observer_;
};

}  // namespace lrwpan::mac
