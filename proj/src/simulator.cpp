#include "lrwpan/simulator.hpp"

#include "lrwpan/check.hpp"

namespace lrwpan {

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    0x9e3779b9u};
  engine_.seed(seq);
}

std::int64_t RngStream::uniform_int(std::int64_t lo, std::int64_t hi) {
  LRWPAN_CHECK(lo <= hi, "uniform_int: empty range");
  std::uniform_int_distribution<std::int64_t> dist(lo, hi);
  return dist(engine_);
}

Simulator::Simulator(std::uint64_t seed) : seed_(seed) {}

EventHandle Simulator::schedule_at(SymbolTime at, NodeId target, std::string_view kind,
                                   std::function<void()> fn) {
  LRWPAN_CHECK(at >= now_, "event scheduled in the past");
  const std::uint64_t seq = next_seq_++;
  queue_.emplace(Key{at.symbols(), seq}, Pending{target, kind, std::move(fn)});
  ++scheduled_;
  return EventHandle{at, seq};
}

bool Simulator::cancel(EventHandle& handle) {
  if (!handle.valid()) {
    return false;
  }
  const auto erased = queue_.erase(Key{handle.fire_at.symbols(), handle.seq});
  handle = EventHandle{};
  if (erased != 0) {
    ++cancelled_;
    return true;
  }
  return false;
}

std::size_t Simulator::run_until(SymbolTime end) {
  LRWPAN_CHECK(end >= now_, "run_until into the past");
  std::size_t count = 0;
  while (!queue_.empty()) {
    auto it = queue_.begin();
    if (it->first.first > end.symbols()) {
      break;
    }
    const SymbolTime at(it->first.first);
    const std::uint64_t seq = it->first.second;
    Pending ev = std::move(it->second);
    queue_.erase(it);
    now_ = at;
    ++dispatched_;
    ++count;
    if (observer_) {
      observer_(DispatchRecord{at, seq, ev.target, ev.kind});
    }
    ev.fn();
  }
  now_ = end;
  return count;
}

RngStream& Simulator::rng(NodeId stream) {
  auto it = streams_.find(stream);
  if (it == streams_.end()) {
    it = streams_.emplace(stream, RngStream(seed_, stream)).first;
  }
  return it->second;
}

}  // namespace lrwpan
