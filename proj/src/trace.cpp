#include "lrwpan/trace.hpp"

namespace lrwpan {

std::string format_trace_line(SymbolTime t, NodeId node, std::string_view event) {
  std::string line = "[";
  line += format_seconds(t);
  line += "](node ";
  line += std::to_string(node);
  line += ") ";
  line += event;
  return line;
}

void TraceSink::emit(SymbolTime t, NodeId node, std::string_view event) {
  if (out_ != nullptr) {
    *out_ << format_trace_line(t, node, event) << '\n';
  }
}

}  // namespace lrwpan
