#include "trace_scanner.hpp"

#include <cstdio>
#include <regex>
#include <sstream>

namespace oracle {

namespace {

std::string six(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

TraceTally scan_trace(std::string_view text) {
  static const std::regex line_re(R"(^\[(\d+)\.(\d{7})\]\(node (\d+)\) (.+)$)");
  static const std::regex recv_re(R"(^data frame received from:\d+ seq:\d+ payload:(\d+)$)");
  static const std::regex drop_re(R"(^packet dropped \((\w+)\)$)");

  TraceTally t;
  std::istringstream in{std::string(text)};
  std::string line;
  std::uint64_t last_whole = 0, last_frac = 0;
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    std::smatch m;
    if (!std::regex_match(line, m, line_re)) {
      t.malformed.push_back(line);
      continue;
    }
    ++t.lines;
    const std::uint64_t whole = std::stoull(m[1]);
    const std::uint64_t frac = std::stoull(m[2]);
    if (whole < last_whole || (whole == last_whole && frac < last_frac)) {
      t.time_ordered = false;
    }
    last_whole = whole;
    last_frac = frac;

    const std::string event = m[4];
    std::smatch e;
    if (event.rfind("sending data frame", 0) == 0) {
      ++t.data_sent;
    } else if (std::regex_match(event, e, recv_re)) {
      ++t.data_received;
      t.bytes_received += std::stoull(e[1]);
    } else if (event.rfind("collision data frame", 0) == 0) {
      ++t.collisions_data;
    } else if (event.rfind("collision other frame", 0) == 0) {
      ++t.collisions_other;
    } else if (std::regex_match(event, e, drop_re)) {
      ++t.drops[e[1]];
    }
  }
  return t;
}

ScannedMetrics recompute(const TraceTally& t, double sim_time_s, int n_nodes) {
  ScannedMetrics s;
  s.throughput = six(static_cast<double>(t.bytes_received) * 8.0 / 1000.0 / sim_time_s /
                     static_cast<double>(n_nodes));
  if (t.data_sent > 0) {
    s.delivery = six(100.0 * static_cast<double>(t.data_received) /
                     static_cast<double>(t.data_sent));
  }
  const std::uint64_t all = t.collisions_data + t.collisions_other;
  if (all > 0) {
    s.collision = six(100.0 * static_cast<double>(t.collisions_data) / static_cast<double>(all));
  }
  return s;
}

std::vector<std::string> split_csv(std::string_view line) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const auto comma = line.find(',', pos);
    out.emplace_back(line.substr(pos, comma == std::string_view::npos ? std::string_view::npos
                                                                       : comma - pos));
    if (comma == std::string_view::npos) {
      return out;
    }
    pos = comma + 1;
  }
}

}  // namespace oracle
