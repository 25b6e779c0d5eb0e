#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "lrwpan/gts.hpp"
#include "lrwpan/metrics.hpp"
#include "lrwpan/scenario.hpp"
#include "lrwpan/superframe.hpp"

namespace py = pybind11;
using namespace lrwpan;

namespace {

py::dict report_dict(const metrics::MetricsReport& r) {
  py::dict d;
  d["bo"] = r.beacon_order;
  d["so"] = r.superframe_order;
  d["n_nodes"] = r.n_nodes;
  d["seed"] = r.seed;
  d["sim_time_s"] = r.sim_time_s;
  d["S_kbps"] = r.throughput_kbps;
  d["Pd_pct"] = r.pdr_pct;
  d["C_pct"] = r.collision_pct;
  d["duty_cycle_pct"] = r.duty_cycle_pct;
  d["sent_data_frames"] = r.counters.sent_data_frames;
  d["received_data_frames"] = r.counters.received_data_frames;
  d["received_data_bytes"] = r.counters.received_data_bytes;
  for (std::size_t i = 0; i < metrics::kDropCauseCount; ++i) {
    d[py::str(std::string(to_string(static_cast<metrics::DropCause>(i))))] = r.counters.dropped[i];
  }
  return d;
}

py::dict interval_dict(const mac::Interval& i) {
  py::dict d;
  d["begin"] = i.begin.symbols();
  d["end"] = i.end.symbols();
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Beacon-enabled IEEE 802.15.4 MAC simulator";

  m.attr("SYMBOL_RATE") = kSymbolRate;
  m.def("airtime", &airtime, py::arg("bytes"), "Air time of a frame in symbols.");
  m.def("format_seconds", [](std::uint64_t symbols) { return format_seconds(SymbolTime(symbols)); },
        py::arg("symbols"));

  py::class_<mac::SuperframeConfig>(m, "SuperframeConfig")
      .def(py::init([](int bo, int so, bool ble) {
             mac::SuperframeConfig c;
             c.beacon_order = bo;
             c.superframe_order = so;
             c.battery_life_extension = ble;
             c.validate();
             return c;
           }),
           py::arg("bo"), py::arg("so"), py::arg("battery_life_extension") = false)
      .def_readonly("bo", &mac::SuperframeConfig::beacon_order)
      .def_readonly("so", &mac::SuperframeConfig::superframe_order)
      .def_readonly("battery_life_extension", &mac::SuperframeConfig::battery_life_extension)
      .def_property_readonly("superframe_duration", &mac::SuperframeConfig::superframe_duration)
      .def_property_readonly("beacon_interval", &mac::SuperframeConfig::beacon_interval)
      .def_property_readonly("slot_duration", &mac::SuperframeConfig::slot_duration)
      .def_property_readonly("duty_cycle", &mac::SuperframeConfig::duty_cycle);

  py::register_exception<mac::InvalidConfig>(m, "InvalidConfig", PyExc_ValueError);
  py::register_exception<scenario::ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def(
      "superframe_timeline",
      [](const mac::SuperframeConfig& cfg, std::uint64_t beacon_start,
         std::uint64_t beacon_duration, int final_cap_slot) {
        const auto t = mac::superframe_timeline(cfg, SymbolTime(beacon_start), beacon_duration,
                                                final_cap_slot);
        py::dict d;
        d["beacon"] = interval_dict(t.beacon);
        d["cap"] = interval_dict(t.cap);
        d["cfp"] = interval_dict(t.cfp);
        d["inactive"] = interval_dict(t.inactive);
        py::list bounds;
        for (const auto& b : t.slot_boundaries) {
          bounds.append(b.symbols());
        }
        d["slot_boundaries"] = bounds;
        return d;
      },
      py::arg("cfg"), py::arg("beacon_start") = 0, py::arg("beacon_duration") = 0,
      py::arg("final_cap_slot") = 15);

  py::class_<metrics::Counters>(m, "Counters")
      .def(py::init<>())
      .def_readwrite("sent_data_frames", &metrics::Counters::sent_data_frames)
      .def_readwrite("received_data_frames", &metrics::Counters::received_data_frames)
      .def_readwrite("received_data_bytes", &metrics::Counters::received_data_bytes)
      .def_property(
          "collision_data",
          [](const metrics::Counters& c) { return c.drops(metrics::DropCause::kCollisionData); },
          [](metrics::Counters& c, std::uint64_t v) {
            c.drops(metrics::DropCause::kCollisionData) = v;
          })
      .def_property(
          "collision_other",
          [](const metrics::Counters& c) { return c.drops(metrics::DropCause::kCollisionOther); },
          [](metrics::Counters& c, std::uint64_t v) {
            c.drops(metrics::DropCause::kCollisionOther) = v;
          });

  m.def("throughput", &metrics::throughput, py::arg("counters"), py::arg("sim_time_s"),
        py::arg("n_nodes"));
  m.def("packet_delivery_ratio", &metrics::packet_delivery_ratio, py::arg("counters"));
  m.def("collision_rate", &metrics::collision_rate, py::arg("counters"));
  m.def("duty_cycle", &metrics::duty_cycle, py::arg("cfg"));

  py::enum_<GtsDirection>(m, "GtsDirection")
      .value("TRANSMIT", GtsDirection::kTransmit)
      .value("RECEIVE", GtsDirection::kReceive);

  py::class_<GtsDescriptor>(m, "GtsDescriptor")
      .def_readonly("dev_addr", &GtsDescriptor::dev_addr)
      .def_readonly("start_slot", &GtsDescriptor::start_slot)
      .def_readonly("length", &GtsDescriptor::length)
      .def_readonly("direction", &GtsDescriptor::direction)
      .def("__repr__", [](const GtsDescriptor& d) {
        return "GtsDescriptor(dev_addr=" + std::to_string(d.dev_addr) +
               ", start_slot=" + std::to_string(d.start_slot) +
               ", length=" + std::to_string(d.length) + ")";
      });

  py::class_<mac::GtsTable>(m, "GtsTable")
      .def(py::init<mac::SuperframeConfig>(), py::arg("cfg"))
      .def(
          "allocate",
          [](mac::GtsTable& t, Address dev, int length, GtsDirection dir) {
            return t.allocate(dev, length, dir).descriptor;
          },
          py::arg("dev_addr"), py::arg("length"), py::arg("direction") = GtsDirection::kTransmit,
          "Returns the descriptor, or None when the request is denied.")
      .def("deallocate", &mac::GtsTable::deallocate, py::arg("dev_addr"),
           py::arg("direction") = GtsDirection::kTransmit)
      .def_property_readonly("descriptors", &mac::GtsTable::descriptors)
      .def_property_readonly("final_cap_slot", &mac::GtsTable::final_cap_slot);

  m.def(
      "parse_config",
      [](const std::string& text) {
        const auto cfg = scenario::parse_config(text);
        py::list points;
        for (const auto& p : scenario::expand(cfg)) {
          points.append(py::make_tuple(p.beacon_order, p.superframe_order, p.n_devices));
        }
        return points;
      },
      py::arg("text"), "Validates a configuration and returns its (bo, so, n_devices) points.");

  m.def(
      "run_config",
      [](const std::string& text, std::optional<std::vector<std::uint64_t>> seeds,
         std::optional<std::filesystem::path> trace_dir) {
        auto cfg = scenario::parse_config(text);
        if (seeds) {
          cfg.seeds = *seeds;
        }
        scenario::MatrixOptions opts;
        opts.trace_dir = trace_dir;
        std::vector<scenario::RunRecord> records;
        {
          py::gil_scoped_release release;
          records = scenario::run_matrix(cfg, opts);
        }
        py::list rows;
        for (const auto& r : records) {
          rows.append(report_dict(r.report));
        }
        return py::make_tuple(rows, scenario::to_csv(records));
      },
      py::arg("text"), py::arg("seeds") = py::none(), py::arg("trace_dir") = py::none(),
      "Runs every point of a configuration. Returns (rows, csv_text).");

  m.def(
      "simulate",
      [](int bo, int so, int n_devices, std::uint64_t seed, double sim_time_s, int n_gts_devices,
         int gts_length, bool trace) {
        RunParams p;
        p.superframe.beacon_order = bo;
        p.superframe.superframe_order = so;
        p.n_devices = n_devices;
        p.seed = seed;
        p.sim_time_s = sim_time_s;
        p.n_gts_devices = n_gts_devices;
        p.gts_length = gts_length;
        std::ostringstream out;
        metrics::MetricsReport report;
        {
          py::gil_scoped_release release;
          Network net(p, trace ? &out : nullptr);
          net.run();
          report = net.report();
        }
        return py::make_tuple(report_dict(report), out.str());
      },
      py::arg("bo") = 3, py::arg("so") = 3, py::arg("n_devices") = 10, py::arg("seed") = 1,
      py::arg("sim_time_s") = 60.0, py::arg("n_gts_devices") = 0, py::arg("gts_length") = 1,
      py::arg("trace") = false, "One run with default traffic. Returns (report, trace_text).");
}
