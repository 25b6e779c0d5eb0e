#include "csma_reference.hpp"

#include <optional>

#include "lrwpan/csma.hpp"
#include "lrwpan/simulator.hpp"

namespace oracle {

std::string describe(const Step& s) {
  static const char* names[] = {"backoff", "defer", "cca", "transmit", "failure"};
  return std::string(names[static_cast<int>(s.kind)]) + " at=" + std::to_string(s.at) +
         " value=" + std::to_string(s.value) + " nb=" + std::to_string(s.nb) +
         " cw=" + std::to_string(s.cw) + " be=" + std::to_string(s.be);
}

std::vector<Step> interpret(const CsmaScenario& sc) {
  lrwpan::RngStream rng(sc.seed, sc.node);
  const std::uint64_t horizon = sc.beacon_interval * static_cast<std::uint64_t>(sc.superframes);
  std::vector<Step> out;
  std::size_t script = 0;

  int nb = 0;
  int cw = 2;
  int be = sc.min_be;
  if (sc.battery_life_extension && be > 2) {
    be = 2;
  }
  auto emit = [&](StepKind k, std::uint64_t at, int value, std::uint64_t dispatched) {
    if (dispatched <= horizon) {
      out.push_back(Step{k, at, value, nb, cw, be});
    }
    return dispatched <= horizon;
  };

  std::uint64_t t = sc.start_at;
  enum class Phase { kRound, kCca, kTransmit, kDone } phase = Phase::kRound;
  std::uint64_t window = 0;
  while (phase != Phase::kDone && t <= horizon) {
    const std::uint64_t sf_start = t / sc.beacon_interval * sc.beacon_interval;
    const std::uint64_t cap_begin = sf_start + sc.cap_begin;
    const std::uint64_t cap_end = sf_start + sc.cap_end;
    // Next CAP opening strictly after t, where a parked run is resumed.
    std::uint64_t resume = cap_begin;
    while (resume <= t) {
      resume += sc.beacon_interval;
    }

    switch (phase) {
      case Phase::kRound: {
        if (t >= cap_end) {
          emit(StepKind::kDefer, t, 0, t);
          t = resume;
          break;
        }
        cw = 2;
        std::uint64_t x = t < cap_begin ? cap_begin : t;
        while ((x - sf_start) % 20 != 0) {
          ++x;
        }
        const int delay = static_cast<int>(rng.uniform_int(0, (1 << be) - 1));
        emit(StepKind::kBackoff, x, delay, t);
        std::uint64_t y = x;
        for (int i = 0; i < delay * 20; ++i) {
          ++y;
        }
        if (y + 2 * 20 + sc.exchange > cap_end) {
          emit(StepKind::kDefer, t, 0, t);
          t = resume;
          break;
        }
        window = y;
        t = y + 8;
        phase = Phase::kCca;
        break;
      }
      case Phase::kCca: {
        const bool busy = script < sc.cca_busy.size() ? sc.cca_busy[script] : false;
        ++script;
        emit(StepKind::kCca, window, busy ? 1 : 0, t);
        if (busy) {
          cw = 2;
          ++nb;
          be = be + 1 > sc.max_be ? sc.max_be : be + 1;
          if (nb > sc.max_backoffs) {
            emit(StepKind::kFailure, t, 0, t);
            phase = Phase::kDone;
          } else {
            phase = Phase::kRound;
          }
          break;
        }
        --cw;
        window += 20;
        if (cw > 0) {
          t = window + 8;
        } else {
          t = window;
          phase = Phase::kTransmit;
        }
        break;
      }
      case Phase::kTransmit:
        emit(StepKind::kTransmit, t, 0, t);
        phase = Phase::kDone;
        break;
      case Phase::kDone:
        break;
    }
  }
  return out;
}

std::vector<Step> run_implementation(const CsmaScenario& sc) {
  using namespace lrwpan;
  Simulator sim(sc.seed);
  std::size_t script = 0;
  auto cap_for = [&sc](SymbolTime now) -> std::optional<mac::CapWindow> {
    const std::uint64_t start = now.symbols() / sc.beacon_interval * sc.beacon_interval;
    if (now.symbols() >= start + sc.cap_end) {
      return std::nullopt;
    }
    return mac::CapWindow{SymbolTime(start), SymbolTime(start + sc.cap_begin),
                          SymbolTime(start + sc.cap_end)};
  };
  mac::SlottedCsma csma(
      sim, sc.node,
      mac::CsmaParams{sc.min_be, sc.max_be, sc.max_backoffs, sc.battery_life_extension},
      mac::SlottedCsma::Environment{
          [&] { return cap_for(sim.now()); },
          [&] {
            const bool busy = script < sc.cca_busy.size() ? sc.cca_busy[script] : false;
            ++script;
            return busy ? phy::CcaResult::kBusy : phy::CcaResult::kIdle;
          },
          [] { return true; },
          [] {}});
  std::vector<Step> out;
  csma.set_step_observer([&](const mac::CsmaStep& s) {
    out.push_back(Step{static_cast<StepKind>(s.kind), s.at.symbols(), s.value, s.state.nb,
                       s.state.cw, s.state.be});
  });
  for (int k = 0; k <= sc.superframes; ++k) {
    const SymbolTime at(static_cast<std::uint64_t>(k) * sc.beacon_interval + sc.cap_begin);
    sim.schedule_at(at, 0, "test.resume", [&csma] { csma.resume(); });
  }
  sim.schedule_at(SymbolTime(sc.start_at), sc.node, "test.start",
                  [&csma, &sc] { csma.start(sc.exchange); });
  sim.run_until(SymbolTime(sc.beacon_interval * static_cast<std::uint64_t>(sc.superframes)));
  return out;
}

}  // namespace oracle
