#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "lrwpan/scenario.hpp"
#include "trace_scanner.hpp"

namespace lrwpan::scenario {
namespace {

int count_lines(const std::string& s) {
  return static_cast<int>(std::count(s.begin(), s.end(), '\n'));
}

TEST(ParseConfig, BeaconOrderRangeWithTiedSuperframeOrder) {
  const auto cfg = parse_config("n_devices = 10\nbo = 0..5\nso = bo\n");
  const auto points = expand(cfg);
  ASSERT_EQ(points.size(), 6u);
  for (int bo = 0; bo <= 5; ++bo) {
    EXPECT_EQ(points[static_cast<std::size_t>(bo)], (RunPoint{bo, bo, 10}));
  }
}

TEST(ParseConfig, DutyCycleSweepDerivesSuperframeOrder) {
  const auto cfg = parse_config("n_devices = 10\nbo = 5\nduty_cycle = [100, 50, 25, 12.5]\n");
  const auto points = expand(cfg);
  ASSERT_EQ(points.size(), 4u);
  std::vector<int> so;
  for (const auto& p : points) {
    EXPECT_EQ(p.beacon_order, 5);
    // invert 100 * 2^(so - bo)
    const double duty = 100.0 * std::pow(2.0, p.superframe_order - 5);
    EXPECT_TRUE(duty == 100 || duty == 50 || duty == 25 || duty == 12.5);
    so.push_back(p.superframe_order);
  }
  EXPECT_EQ(so, (std::vector<int>{2, 3, 4, 5}));
}

TEST(ParseConfig, CartesianProductWithDefaults) {
  const auto cfg = parse_config(
      "# comment\nn_devices = [5, 15]\nbo = [1, 3]\nso = [0, 1]\nseeds = [3, 1]\n"
      "sim_time_s = 5\npayload_bytes = 40\n");
  EXPECT_EQ(expand(cfg).size(), 8u);
  EXPECT_EQ(cfg.base.payload_bytes, 40u);
  EXPECT_DOUBLE_EQ(cfg.base.radius_m, 10.0);
  EXPECT_DOUBLE_EQ(cfg.base.range_m, 18.0);
  const auto p = params_for(cfg, RunPoint{3, 1, 15}, 3);
  EXPECT_EQ(p.n_devices, 15);
  EXPECT_EQ(p.seed, 3u);
  EXPECT_EQ(p.superframe.beacon_order, 3);
  EXPECT_EQ(p.superframe.superframe_order, 1);
}

TEST(ParseConfig, InvalidInputIsReportedWithItsLine) {
  auto line_of = [](const std::string& text) {
    try {
      parse_config(text);
    } catch (const ConfigError& e) {
      return e.line();
    }
    return -1;
  };
  EXPECT_EQ(line_of("bo = 3\n"), 0);                                   // n_devices missing
  EXPECT_EQ(line_of("n_devices = 3\nbo = 2\nso = 3\n"), 3);            // so > bo
  EXPECT_EQ(line_of("n_devices = 3\nbo = 15\n"), 2);                   // bo > 14
  EXPECT_EQ(line_of("n_devices = 0\n"), 1);                            // too few devices
  EXPECT_EQ(line_of("n_devices = 3\ninterval_s = 0\n"), 2);            // zero interval
  EXPECT_EQ(line_of("n_devices = 3\nfoo = 1\n"), 2);                   // unknown key
  EXPECT_EQ(line_of("n_devices = 3\nn_devices = 4\n"), 2);             // duplicate key
  EXPECT_EQ(line_of("n_devices = 3\nbo = 5\nduty_cycle = 30\n"), 3);   // not a power of two
  EXPECT_EQ(line_of("n_devices = 3\nbo = x\n"), 2);                    // not a number
  EXPECT_EQ(line_of("n_devices = 3\nbo = 3\nso = 1\nduty_cycle = 50\n"), 4);
  EXPECT_EQ(line_of("n_devices = 3\nbo = 5\n"), -1);
}

TEST(ParseConfig, ErrorMessageNamesTheLine) {
  try {
    parse_config("n_devices = 3\nbo = 2\nso = 3\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(std::string(e.what()).rfind("line 3:", 0), 0u) << e.what();
  }
}

TEST(LoadConfig, ReadsTheShippedConfigurations) {
  const std::filesystem::path dir = LRWPAN_SOURCE_DIR "/configs";
  EXPECT_EQ(expand(load_config(dir / "beacon_order_sweep.cfg")).size(), 6u);
  EXPECT_EQ(expand(load_config(dir / "duty_cycle_sweep.cfg")).size(), 4u);
  EXPECT_EQ(expand(load_config(dir / "collision_grid.cfg")).size(), 21u);
  EXPECT_EQ(expand(load_config(dir / "gts_exchange.cfg")).size(), 1u);
  EXPECT_THROW(load_config(dir / "missing.cfg"), ConfigError);
}

TEST(RunMatrix, CsvHasRunAndAggregateRows) {
  auto cfg = parse_config("n_devices = [2, 3]\nbo = [2, 3]\nso = bo\nseeds = [1, 2, 3]\nsim_time_s = 12\n");
  const auto records = run_matrix(cfg);
  ASSERT_EQ(records.size(), 12u);
  const std::string csv = to_csv(records);
  // header + one row per run + mean and std per point
  EXPECT_EQ(count_lines(csv), 1 + 12 + 2 * 4);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), csv_header());
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  const auto columns = oracle::split_csv(line).size();
  while (std::getline(in, line)) {
    EXPECT_EQ(oracle::split_csv(line).size(), columns) << line;
  }
}

TEST(RunMatrix, OrderedByPointThenSeed) {
  auto cfg = parse_config("n_devices = 2\nbo = [3, 1]\nso = bo\nseeds = [2, 1, 2]\nsim_time_s = 8\n");
  const auto records = run_matrix(cfg);
  ASSERT_EQ(records.size(), 4u);
  EXPECT_EQ(records[0].point.beacon_order, 1);
  EXPECT_EQ(records[0].seed, 1u);
  EXPECT_EQ(records[1].seed, 2u);
  EXPECT_EQ(records[2].point.beacon_order, 3);
}

TEST(RunMatrix, SameSeedGivesIdenticalCsvAndTrace) {
  const auto cfg = parse_config("n_devices = 4\nbo = 2\nso = 1\nsim_time_s = 15\n");
  const RunPoint p = expand(cfg).front();
  std::ostringstream a, b;
  const auto ra = run_one(cfg, p, 7, &a);
  const auto rb = run_one(cfg, p, 7, &b);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(to_csv({ra}), to_csv({rb}));
  std::ostringstream c;
  run_one(cfg, p, 8, &c);
  EXPECT_NE(a.str(), c.str());
}

TEST(RunMatrix, WritesOneTraceFilePerRun) {
  const auto dir = std::filesystem::temp_directory_path() / "lrwpan_scenario_test_traces";
  std::filesystem::remove_all(dir);
  auto cfg = parse_config("n_devices = 2\nbo = [1, 2]\nso = bo\nseeds = [4, 5]\nsim_time_s = 6\n");
  MatrixOptions opts;
  opts.trace_dir = dir;
  int seen = 0;
  opts.on_run = [&seen](const RunRecord&) { ++seen; };
  run_matrix(cfg, opts);
  EXPECT_EQ(seen, 4);
  EXPECT_TRUE(std::filesystem::exists(dir / trace_file_name(RunPoint{2, 2, 2}, 5)));
  EXPECT_EQ(std::distance(std::filesystem::directory_iterator(dir),
                          std::filesystem::directory_iterator{}),
            4);
  std::filesystem::remove_all(dir);
}

TEST(TraceFileName, EncodesThePoint) {
  EXPECT_EQ(trace_file_name(RunPoint{3, 3, 10}, 1), "run_bo3_so3_n10_seed1.tr");
}

TEST(Trace, ScannerReproducesTheMetrics) {
  const auto cfg = parse_config("n_devices = 6\nbo = 1\nso = 1\nsim_time_s = 25\n");
  std::ostringstream trace;
  const auto r = run_one(cfg, expand(cfg).front(), 3, &trace);
  const auto tally = oracle::scan_trace(trace.str());
  EXPECT_TRUE(tally.malformed.empty());
  EXPECT_TRUE(tally.time_ordered);
  EXPECT_EQ(tally.data_sent, r.report.counters.sent_data_frames);
  EXPECT_EQ(tally.data_received, r.report.counters.received_data_frames);
  EXPECT_EQ(tally.bytes_received, r.report.counters.received_data_bytes);
  EXPECT_EQ(tally.collisions_data, r.report.counters.drops(metrics::DropCause::kCollisionData));
  EXPECT_EQ(tally.collisions_other, r.report.counters.drops(metrics::DropCause::kCollisionOther));
  EXPECT_GT(tally.data_received, 0u);
}

}  // namespace
}  // namespace lrwpan::scenario
