#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lrwpan/network.hpp"

namespace lrwpan::scenario {

/// A configuration problem. line() is 0 when no single line is to blame.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

/// A parsed configuration file: fixed run parameters plus the sweep axes.
struct ScenarioConfig {
  RunParams base;
  std::vector<int> beacon_orders{3};
  enum class SoMode { kList, kSameAsBo, kDutyCycle };
  SoMode so_mode = SoMode::kSameAsBo;
  std::vector<int> superframe_orders;
  std::vector<double> duty_cycles;  // percent
  std::vector<int> n_devices;
  std::vector<std::uint64_t> seeds{1};
  bool trace = false;
};

/// Flat `key = value` text; `#` starts a comment. Values may be scalars,
/// lists `[a, b, c]`, or integer ranges `a..b`. `so = bo` ties the orders;
/// `duty_cycle = [...]` derives so from bo instead.
ScenarioConfig parse_config(std::string_view text);
ScenarioConfig load_config(const std::filesystem::path& path);

struct RunPoint {
  int beacon_order = 0;
  int superframe_order = 0;
  int n_devices = 0;

  auto operator<=>(const RunPoint&) const = default;
};

/// Parameter points in ascending (bo, so, n_devices) order, duplicates removed.
std::vector<RunPoint> expand(const ScenarioConfig& cfg);

RunParams params_for(const ScenarioConfig& cfg, const RunPoint& point, std::uint64_t seed);

struct RunRecord {
  RunPoint point;
  std::uint64_t seed = 0;
  metrics::MetricsReport report;
};

/// One simulation; the trace goes to `trace` when given. `inspect` sees the
/// finished network before it is torn down.
RunRecord run_one(const ScenarioConfig& cfg, const RunPoint& point, std::uint64_t seed,
                  std::ostream* trace = nullptr,
                  const std::function<void(Network&)>& inspect = nullptr);

struct MatrixOptions {
  /// One trace file per run is written here when set.
  std::optional<std::filesystem::path> trace_dir;
  std::function<void(const RunRecord&)> on_run;
};

/// Every point for every seed, ordered by point then seed.
std::vector<RunRecord> run_matrix(const ScenarioConfig& cfg, const MatrixOptions& options = {});

/// "run_bo3_so3_n10_seed1.tr"
std::string trace_file_name(const RunPoint& point, std::uint64_t seed);

std::string csv_header();
/// One "run" row per record, then "mean" and "std" rows for each point.
std::string to_csv(const std::vector<RunRecord>& records);

}  // namespace lrwpan::scenario
