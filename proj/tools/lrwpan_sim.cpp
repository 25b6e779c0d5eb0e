#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "lrwpan/scenario.hpp"

namespace sc = lrwpan::scenario;

namespace {

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(item, &used);
    if (used != item.size()) {
      throw std::invalid_argument(item);
    }
    seeds.push_back(v);
  }
  if (seeds.empty()) {
    throw std::invalid_argument(text);
  }
  return seeds;
}

std::string show(const std::optional<double>& v) {
  if (!v) {
    return "-";
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", *v);
  return buf;
}

int run(const std::string& config_path, const std::string& out_path, const std::string& trace_dir,
        const std::string& seeds, bool quiet) {
  sc::ScenarioConfig cfg;
  try {
    cfg = sc::load_config(config_path);
    if (!seeds.empty()) {
      cfg.seeds = parse_seeds(seeds);
    }
  } catch (const sc::ConfigError& e) {
    std::cerr << config_path << ": " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument&) {
    std::cerr << "--seeds expects a comma-separated list of integers\n";
    return 2;
  }

  sc::MatrixOptions opts;
  if (!trace_dir.empty()) {
    opts.trace_dir = trace_dir;
  } else if (cfg.trace) {
    opts.trace_dir = "traces";
  }
  if (!quiet) {
    opts.on_run = [](const sc::RunRecord& r) {
      std::cerr << "bo=" << r.point.beacon_order << " so=" << r.point.superframe_order
                << " n=" << r.point.n_devices << " seed=" << r.seed
                << "  S=" << show(r.report.throughput_kbps) << " kbps"
                << "  Pd=" << show(r.report.pdr_pct) << "%"
                << "  C=" << show(r.report.collision_pct) << "%\n";
    };
  }

  std::vector<sc::RunRecord> records;
  try {
    records = sc::run_matrix(cfg, opts);
  } catch (const std::exception& e) {
    std::cerr << "run failed: " << e.what() << '\n';
    return 1;
  }
  const std::string csv = sc::to_csv(records);
  if (out_path.empty()) {
    std::cout << csv;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out || !(out << csv)) {
      std::cerr << "cannot write " << out_path << '\n';
      return 1;
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Beacon-enabled IEEE 802.15.4 star network simulator"};
  app.require_subcommand(1);

  std::string config_path, out_path, trace_dir, seeds;
  bool quiet = false;
  CLI::App* run_cmd = app.add_subcommand("run", "Run every point of a scenario configuration");
  run_cmd->add_option("config", config_path, "Scenario configuration file")->required();
  run_cmd->add_option("--out", out_path, "CSV output path (default: stdout)");
  run_cmd->add_option("--trace-dir", trace_dir, "Write one trace file per run here");
  run_cmd->add_option("--seeds", seeds, "Comma-separated seeds, overriding the config");
  run_cmd->add_flag("--quiet", quiet, "No per-run progress on stderr");

  CLI11_PARSE(app, argc, argv);
  return run(config_path, out_path, trace_dir, seeds, quiet);
}
