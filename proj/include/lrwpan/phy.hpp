#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "lrwpan/frame.hpp"
#include "lrwpan/simulator.hpp"

namespace lrwpan::phy {

enum class TrxState : std::uint8_t { kTxOn, kRxOn, kTrxOff };
enum class PhyStatus : std::uint8_t { kSuccess, kTrxStateError, kIdle, kBusy };
enum class CcaResult : std::uint8_t { kIdle, kBusy };

struct Position {
  double x = 0.0;
  double y = 0.0;
};

struct RadioConfig {
  Position position;
  double range_m = 18.0;  // decode and carrier-sense threshold
  std::uint64_t bitrate = kBitRate;
};

/// What happened to one transmission at one other radio.
enum class RxOutcome : std::uint8_t {
  kOutOfRange,
  kNotListening,  // TRX_OFF at start, or switched off mid-frame
  kReceiving,     // transient
  kCorrupted,     // overlapped by another transmission audible at the receiver
  kDelivered,
};

struct Transmission {
  std::uint64_t id = 0;
  NodeId sender = 0;
  Frame frame;
  SymbolTime start;
  SymbolTime end;
  std::vector<RxOutcome> outcomes;  // indexed by node id

  bool corrupted_at(NodeId n) const { return outcomes.at(n) == RxOutcome::kCorrupted; }
};

/// Hooks for logging and metrics. Called synchronously from the channel.
class ChannelObserver {
 public:
  virtual ~ChannelObserver() = default;
  virtual void on_transmission_start(const Transmission&) {}
  virtual void on_transmission_end(const Transmission&) {}
  virtual void on_cca(NodeId /*observer*/, SymbolTime /*window_start*/, CcaResult) {}
};

/// Shared medium with unit-disk visibility and zero propagation delay.
/// Any overlap audible at a receiver corrupts every frame involved there.
class Channel {
 public:
  using ReceiveHandler = std::function<void(const Frame&)>;
  using TxDoneHandler = std::function<void(const Frame&)>;

  explicit Channel(Simulator& sim) : sim_(sim) {}

  /// Registers the radio for node `id`; ids must be dense from 0.
  void add_radio(NodeId id, RadioConfig cfg);
  std::size_t radio_count() const { return radios_.size(); }
  const RadioConfig& radio_config(NodeId id) const { return radios_.at(id).cfg; }

  void set_receive_handler(NodeId id, ReceiveHandler h) { radios_.at(id).on_receive = std::move(h); }
  void set_tx_done_handler(NodeId id, TxDoneHandler h) { radios_.at(id).on_tx_done = std::move(h); }
  void add_observer(ChannelObserver* observer) { observers_.push_back(observer); }

  bool in_range(NodeId a, NodeId b) const;
  double distance(NodeId a, NodeId b) const;

  /// PLME-SET-TRX-STATE. Leaving RX_ON aborts receptions in progress.
  /// Returns the prior state.
  TrxState set_trx_state(NodeId id, TrxState mode);
  TrxState trx_state(NodeId id) const { return radios_.at(id).state; }
  bool is_transmitting(NodeId id) const { return radios_.at(id).current_tx != 0; }

  /// PD-DATA.request. Requires TX_ON; a second concurrent transmission by
  /// the same sender aborts. The tx-done handler fires at the frame end.
  PhyStatus pd_data_request(NodeId sender, const Frame& frame);

  /// PLME-CCA.request: evaluates the CCA window ending now.
  /// Returns kIdle, kBusy, or kTrxStateError when not in RX_ON.
  PhyStatus plme_cca_request(NodeId observer);

  std::uint64_t transmissions_started() const { return next_tx_id_ - 1; }

 private:
  struct Radio {
    RadioConfig cfg;
    TrxState state = TrxState::kTrxOff;
    std::uint64_t current_tx = 0;  // id of own transmission in flight
    ReceiveHandler on_receive;
    TxDoneHandler on_tx_done;
  };

  void finish(std::uint64_t tx_id);

  Simulator& sim_;
  std::vector<Radio> radios_;
  std::vector<ChannelObserver*> observers_;
  std::deque<std::unique_ptr<Transmission>> active_;
  std::deque<std::unique_ptr<Transmission>> recent_;  // ended, kept for CCA windows
  std::uint64_t next_tx_id_ = 1;
};

}  // namespace lrwpan::phy
