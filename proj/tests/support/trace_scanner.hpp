#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace oracle {

/// Counts derived purely from the text of a trace.
struct TraceTally {
  std::uint64_t lines = 0;
  std::uint64_t data_sent = 0;
  std::uint64_t data_received = 0;
  std::uint64_t bytes_received = 0;
  std::uint64_t collisions_data = 0;
  std::uint64_t collisions_other = 0;
  std::map<std::string, std::uint64_t> drops;  // cause -> count
  bool time_ordered = true;
  std::vector<std::string> malformed;
};

TraceTally scan_trace(std::string_view text);

/// Metrics recomputed from a tally, formatted as the CSV writes them.
struct ScannedMetrics {
  std::string throughput;
  std::string delivery;   // empty when nothing was sent
  std::string collision;  // empty without collisions
};

ScannedMetrics recompute(const TraceTally& t, double sim_time_s, int n_nodes);

/// Splits one CSV line on commas.
std::vector<std::string> split_csv(std::string_view line);

}  // namespace oracle
