#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string_view>
#include <utility>

#include "lrwpan/time.hpp"

namespace lrwpan {

using NodeId = std::uint16_t;

/// Identifies a scheduled event so it can be cancelled before it fires.
struct EventHandle {
  SymbolTime fire_at;
  std::uint64_t seq = 0;
  bool valid() const { return seq != 0; }
};

/// One dispatched event, as seen by an optional dispatch observer.
struct DispatchRecord {
  SymbolTime fire_at;
  std::uint64_t seq;
  NodeId target;
  std::string_view kind;
};

/// Per-node pseudo-random stream. Identical (seed, stream) pairs replay
/// identical draw sequences.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream);

  /// Uniform integer in [lo, hi]. lo > hi aborts.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

 private:
  std::mt19937_64 engine_;
};

/// Discrete-event kernel. Events with equal fire times dispatch in
/// insertion order.
class Simulator {
 public:
  explicit Simulator(std::uint64_t seed = 1);

  Simulator(const Simulator&) = delete;
  Simulator& operator=(const Simulator&) = delete;

  SymbolTime now() const { return now_; }
  std::uint64_t seed() const { return seed_; }

  /// Scheduling before now() aborts.
  EventHandle schedule_at(SymbolTime at, NodeId target, std::string_view kind,
                          std::function<void()> fn);
  EventHandle schedule_in(Symbols delay, NodeId target, std::string_view kind,
                          std::function<void()> fn) {
    return schedule_at(now_ + delay, target, kind, std::move(fn));
  }

  /// Returns false when the event already fired or was cancelled.
  bool cancel(EventHandle& handle);

  /// Dispatches every event with fire time <= end, then sets the clock to end.
  std::size_t run_until(SymbolTime end);

  bool empty() const { return queue_.empty(); }

  RngStream& rng(NodeId stream);
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi, NodeId stream) {
    return rng(stream).uniform_int(lo, hi);
  }

  std::uint64_t scheduled_count() const { return scheduled_; }
  std::uint64_t cancelled_count() const { return cancelled_; }
  std::uint64_t dispatched_count() const { return dispatched_; }

  void set_dispatch_observer(std::function<void(const DispatchRecord&)> observer) {
    observer_ = std::move(observer);
  }

 private:
  struct Pending {
    NodeId target;
    std::string_view kind;
    std::function<void()> fn;
  };
  using Key = std::pair<std::uint64_t, std::uint64_t>;  // (fire_at, seq)

  SymbolTime now_;
  std::uint64_t seed_;
  std::uint64_t next_seq_ = 1;
  std::map<Key, Pending> queue_;
  std::map<NodeId, RngStream> streams_;
  std::uint64_t scheduled_ = 0;
  std::uint64_t cancelled_ = 0;
  std::uint64_t dispatched_ = 0;
  std::function<void(const DispatchRecord&)> observer_;
};

}  // namespace lrwpan
