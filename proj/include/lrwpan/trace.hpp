#pragma once

#include <ostream>
#include <string>
#include <string_view>

#include "lrwpan/simulator.hpp"

namespace lrwpan {

/// "[<seconds, 7 decimals>](node <id>) <event>"
std::string format_trace_line(SymbolTime t, NodeId node, std::string_view event);

/// Line-oriented, human-readable event trace. A sink without a stream
/// discards everything.
class TraceSink {
 public:
  TraceSink() = default;
  explicit TraceSink(std::ostream* out) : out_(out) {}

  bool enabled() const { return out_ != nullptr; }
  void emit(SymbolTime t, NodeId node, std::string_view event);

 private:
  std::ostream* out_ = nullptr;
};

}  // namespace lrwpan
