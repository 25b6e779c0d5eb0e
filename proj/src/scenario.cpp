#include "lrwpan/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "lrwpan/check.hpp"

namespace lrwpan::scenario {

ConfigError::ConfigError(int line, const std::string& message)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
      line_(line) {}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) {
    return {};
  }
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Entry {
  int line;
  std::string value;
};

template <typename T>
T parse_number(std::string_view s, int line, std::string_view key) {
  s = trim(s);
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ConfigError(line, "invalid value '" + std::string(s) + "' for " + std::string(key));
  }
  return v;
}

bool parse_bool(std::string_view s, int line, std::string_view key) {
  s = trim(s);
  if (s == "1" || s == "true" || s == "yes") {
    return true;
  }
  if (s == "0" || s == "false" || s == "no") {
    return false;
  }
  throw ConfigError(line, "invalid boolean '" + std::string(s) + "' for " + std::string(key));
}

// Splits "[a, b]" into items, expands integer ranges "a..b", passes
// scalars through as a one-element list.
std::vector<std::string> items(const Entry& e, std::string_view key) {
  std::string_view v = trim(e.value);
  std::vector<std::string> out;
  auto add = [&](std::string_view item) {
    item = trim(item);
    if (item.empty()) {
      throw ConfigError(e.line, "empty list item in " + std::string(key));
    }
    const auto dots = item.find("..");
    if (dots == std::string_view::npos) {
      out.emplace_back(item);
      return;
    }
    const auto lo = parse_number<long long>(item.substr(0, dots), e.line, key);
    const auto hi = parse_number<long long>(item.substr(dots + 2), e.line, key);
    if (lo > hi) {
      throw ConfigError(e.line, "empty range in " + std::string(key));
    }
    for (long long i = lo; i <= hi; ++i) {
      out.push_back(std::to_string(i));
    }
  };
  if (!v.empty() && v.front() == '[') {
    if (v.back() != ']') {
      throw ConfigError(e.line, "unterminated list for " + std::string(key));
    }
    v = trim(v.substr(1, v.size() - 2));
    if (v.empty()) {
      throw ConfigError(e.line, "empty list for " + std::string(key));
    }
    std::size_t pos = 0;
    while (true) {
      const auto comma = v.find(',', pos);
      add(v.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
      if (comma == std::string_view::npos) {
        break;
      }
      pos = comma + 1;
    }
  } else {
    add(v);
  }
  return out;
}

template <typename T>
std::vector<T> number_list(const Entry& e, std::string_view key) {
  std::vector<T> out;
  for (const auto& s : items(e, key)) {
    out.push_back(parse_number<T>(s, e.line, key));
  }
  return out;
}

const std::vector<std::string_view>& known_keys() {
  static const std::vector<std::string_view> keys{
      "bo",           "so",           "duty_cycle",     "n_devices",
      "seeds",        "radius_m",     "range_m",        "n_gts_devices",
      "gts_length",   "gts_direction", "payload_bytes", "interval_s",
      "sim_time_s",   "stagger_s",    "traffic_start_s", "queue_capacity",
      "gts_permit",   "battery_life_extension", "scan_exponent", "association_retry_s",
      "trace"};
  return keys;
}

// so for a duty cycle in percent at beacon order bo, if one exists.
std::optional<int> so_for_duty(int bo, double duty_pct) {
  if (!(duty_pct > 0.0) || duty_pct > 100.0) {
    return std::nullopt;
  }
  const double exponent = std::log2(duty_pct / 100.0);
  const double rounded = std::round(exponent);
  if (std::abs(exponent - rounded) > 1e-9) {
    return std::nullopt;
  }
  const int so = bo + static_cast<int>(rounded);
  if (so < 0) {
    return std::nullopt;
  }
  return so;
}

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

}  // namespace

ScenarioConfig parse_config(std::string_view text) {
  std::map<std::string, Entry, std::less<>> entries;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(line_no, "expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    const auto& keys = known_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw ConfigError(line_no, "unknown key '" + key + "'");
    }
    if (value.empty()) {
      throw ConfigError(line_no, "missing value for " + key);
    }
    if (!entries.emplace(key, Entry{line_no, value}).second) {
      throw ConfigError(line_no, "duplicate key '" + key + "'");
    }
  }

  ScenarioConfig cfg;
  RunParams& b = cfg.base;
  auto get = [&](std::string_view key) -> const Entry* {
    auto it = entries.find(key);
    return it == entries.end() ? nullptr : &it->second;
  };
  auto scalar = [&](std::string_view key, auto& target) {
    if (const Entry* e = get(key)) {
      using T = std::decay_t<decltype(target)>;
      if constexpr (std::is_same_v<T, bool>) {
        target = parse_bool(e->value, e->line, key);
      } else {
        target = parse_number<T>(e->value, e->line, key);
      }
    }
  };

  const Entry* n_entry = get("n_devices");
  if (!n_entry) {
    throw ConfigError(0, "missing required key n_devices");
  }
  cfg.n_devices = number_list<int>(*n_entry, "n_devices");
  for (int n : cfg.n_devices) {
    if (n < 1) {
      throw ConfigError(n_entry->line, "n_devices must be at least 1");
    }
  }

  const Entry* bo_entry = get("bo");
  if (bo_entry) {
    cfg.beacon_orders = number_list<int>(*bo_entry, "bo");
  }
  for (int bo : cfg.beacon_orders) {
    if (bo < 0 || bo > mac::kMaxBeaconOrder) {
      throw ConfigError(bo_entry ? bo_entry->line : 0, "bo must be between 0 and 14");
    }
  }

  const Entry* so_entry = get("so");
  const Entry* duty_entry = get("duty_cycle");
  if (so_entry && duty_entry) {
    throw ConfigError(duty_entry->line, "so and duty_cycle are mutually exclusive");
  }
  if (duty_entry) {
    cfg.so_mode = ScenarioConfig::SoMode::kDutyCycle;
    cfg.duty_cycles = number_list<double>(*duty_entry, "duty_cycle");
    for (int bo : cfg.beacon_orders) {
      for (double d : cfg.duty_cycles) {
        if (!so_for_duty(bo, d)) {
          throw ConfigError(duty_entry->line,
                            "duty_cycle " + fmt(d) + " is not 100 * 2^-k reachable from bo " +
                                std::to_string(bo));
        }
      }
    }
  } else if (so_entry && trim(so_entry->value) != "bo") {
    cfg.so_mode = ScenarioConfig::SoMode::kList;
    cfg.superframe_orders = number_list<int>(*so_entry, "so");
    for (int so : cfg.superframe_orders) {
      if (so < 0) {
        throw ConfigError(so_entry->line, "so must not be negative");
      }
      for (int bo : cfg.beacon_orders) {
        if (so > bo) {
          throw ConfigError(so_entry->line, "so " + std::to_string(so) +
                                                " exceeds bo " + std::to_string(bo));
        }
      }
    }
  }

  if (const Entry* e = get("seeds")) {
    cfg.seeds = number_list<std::uint64_t>(*e, "seeds");
  }

  scalar("radius_m", b.radius_m);
  scalar("range_m", b.range_m);
  scalar("n_gts_devices", b.n_gts_devices);
  scalar("gts_length", b.gts_length);
  scalar("payload_bytes", b.payload_bytes);
  scalar("interval_s", b.interval_s);
  scalar("sim_time_s", b.sim_time_s);
  scalar("stagger_s", b.stagger_s);
  scalar("traffic_start_s", b.traffic_start_s);
  scalar("queue_capacity", b.queue_capacity);
  scalar("gts_permit", b.gts_permit);
  scalar("battery_life_extension", b.superframe.battery_life_extension);
  scalar("scan_exponent", b.scan_exponent);
  scalar("association_retry_s", b.association_retry_s);
  scalar("trace", cfg.trace);
  if (const Entry* e = get("gts_direction")) {
    const std::string_view v = trim(e->value);
    if (v == "transmit" || v == "0") {
      b.gts_direction = GtsDirection::kTransmit;
    } else if (v == "receive" || v == "1") {
      b.gts_direction = GtsDirection::kReceive;
    } else {
      throw ConfigError(e->line, "gts_direction must be transmit or receive");
    }
  }
  if (const Entry* e = get("interval_s"); e && !(b.interval_s > 0.0)) {
    throw ConfigError(e->line, "interval_s must be positive");
  }

  // Whatever remains is checked per run point.
  for (const RunPoint& p : expand(cfg)) {
    try {
      params_for(cfg, p, cfg.seeds.front()).validate();
    } catch (const mac::InvalidConfig& err) {
      throw ConfigError(0, err.what());
    }
  }
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError(0, "cannot open config file " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::vector<RunPoint> expand(const ScenarioConfig& cfg) {
  std::vector<RunPoint> points;
  for (int bo : cfg.beacon_orders) {
    std::vector<int> sos;
    switch (cfg.so_mode) {
      case ScenarioConfig::SoMode::kSameAsBo:
        sos = {bo};
        break;
      case ScenarioConfig::SoMode::kList:
        sos = cfg.superframe_orders;
        break;
      case ScenarioConfig::SoMode::kDutyCycle:
        for (double d : cfg.duty_cycles) {
          if (auto so = so_for_duty(bo, d)) {
            sos.push_back(*so);
          }
        }
        break;
    }
    for (int so : sos) {
      for (int n : cfg.n_devices) {
        points.push_back(RunPoint{bo, so, n});
      }
    }
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  return points;
}

RunParams params_for(const ScenarioConfig& cfg, const RunPoint& point, std::uint64_t seed) {
  RunParams p = cfg.base;
  p.superframe.beacon_order = point.beacon_order;
  p.superframe.superframe_order = point.superframe_order;
  p.n_devices = point.n_devices;
  p.n_gts_devices = std::min(p.n_gts_devices, point.n_devices);
  p.seed = seed;
  return p;
}

RunRecord run_one(const ScenarioConfig& cfg, const RunPoint& point, std::uint64_t seed,
                  std::ostream* trace, const std::function<void(Network&)>& inspect) {
  check_context() = "bo=" + std::to_string(point.beacon_order) +
                    " so=" + std::to_string(point.superframe_order) +
                    " n_devices=" + std::to_string(point.n_devices) +
                    " seed=" + std::to_string(seed);
  Network net(params_for(cfg, point, seed), trace);
  net.run();
  check_context().clear();
  if (inspect) {
    inspect(net);
  }
  return RunRecord{point, seed, net.report()};
}

std::string trace_file_name(const RunPoint& point, std::uint64_t seed) {
  return "run_bo" + std::to_string(point.beacon_order) + "_so" +
         std::to_string(point.superframe_order) + "_n" + std::to_string(point.n_devices) +
         "_seed" + std::to_string(seed) + ".tr";
}

std::vector<RunRecord> run_matrix(const ScenarioConfig& cfg, const MatrixOptions& options) {
  std::vector<std::uint64_t> seeds = cfg.seeds;
  std::sort(seeds.begin(), seeds.end());
  seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
  if (options.trace_dir) {
    std::filesystem::create_directories(*options.trace_dir);
  }
  std::vector<RunRecord> out;
  for (const RunPoint& p : expand(cfg)) {
    for (std::uint64_t seed : seeds) {
      RunRecord rec;
      if (options.trace_dir) {
        const auto path = *options.trace_dir / trace_file_name(p, seed);
        std::ofstream tr(path, std::ios::binary);
        if (!tr) {
          throw std::runtime_error("cannot write trace file " + path.string());
        }
        rec = run_one(cfg, p, seed, &tr);
      } else {
        rec = run_one(cfg, p, seed);
      }
      if (options.on_run) {
        options.on_run(rec);
      }
      out.push_back(std::move(rec));
    }
  }
  return out;
}

std::string csv_header() {
  std::string h = "row,bo,so,n_nodes,seed,sim_time_s,S_kbps,Pd_pct,C_pct,duty_cycle_pct,"
                  "sent_data_frames,received_data_frames,received_data_bytes";
  for (std::size_t i = 0; i < metrics::kDropCauseCount; ++i) {
    h += ",";
    h += to_string(static_cast<metrics::DropCause>(i));
  }
  return h;
}

namespace {

struct Summary {
  std::optional<double> mean;
  std::optional<double> std;
};

Summary summarize(const std::vector<double>& xs) {
  Summary s;
  if (xs.empty()) {
    return s;
  }
  double sum = 0.0;
  for (double x : xs) {
    sum += x;
  }
  const double m = sum / static_cast<double>(xs.size());
  s.mean = m;
  if (xs.size() >= 2) {
    double ss = 0.0;
    for (double x : xs) {
      ss += (x - m) * (x - m);
    }
    s.std = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return s;
}

std::vector<std::optional<double>> row_values(const metrics::MetricsReport& r) {
  std::vector<std::optional<double>> v{r.throughput_kbps, r.pdr_pct, r.collision_pct,
                                       r.duty_cycle_pct,
                                       static_cast<double>(r.counters.sent_data_frames),
                                       static_cast<double>(r.counters.received_data_frames),
                                       static_cast<double>(r.counters.received_data_bytes)};
  for (auto d : r.counters.dropped) {
    v.push_back(static_cast<double>(d));
  }
  return v;
}

}  // namespace

std::string to_csv(const std::vector<RunRecord>& records) {
  std::ostringstream out;
  out << csv_header() << '\n';
  std::map<RunPoint, std::vector<const RunRecord*>> by_point;
  for (const auto& r : records) {
    by_point[r.point].push_back(&r);
  }
  for (const auto& [point, runs] : by_point) {
    const std::string prefix = std::to_string(point.beacon_order) + "," +
                               std::to_string(point.superframe_order) + "," +
                               std::to_string(point.n_devices) + ",";
    for (const RunRecord* r : runs) {
      const auto& m = r->report;
      out << "run," << prefix << r->seed << ',' << fmt(m.sim_time_s) << ','
          << fmt(m.throughput_kbps) << ',' << fmt(m.pdr_pct) << ',' << fmt(m.collision_pct) << ','
          << fmt(m.duty_cycle_pct) << ',' << m.counters.sent_data_frames << ','
          << m.counters.received_data_frames << ',' << m.counters.received_data_bytes;
      for (auto d : m.counters.dropped) {
        out << ',' << d;
      }
      out << '\n';
    }
    const std::size_t width = row_values(runs.front()->report).size();
    std::vector<Summary> cols(width);
    for (std::size_t c = 0; c < width; ++c) {
      std::vector<double> xs;
      for (const RunRecord* r : runs) {
        if (auto v = row_values(r->report)[c]) {
          xs.push_back(*v);
        }
      }
      cols[c] = summarize(xs);
    }
    const std::string sim_time = fmt(runs.front()->report.sim_time_s);
    for (const char* kind : {"mean", "std"}) {
      out << kind << ',' << prefix << ',' << sim_time;
      for (const auto& s : cols) {
        out << ',' << fmt(std::string_view(kind) == "mean" ? s.mean : s.std);
      }
      out << '\n';
    }
  }
  return out.str();
}

}  // namespace lrwpan::scenario
