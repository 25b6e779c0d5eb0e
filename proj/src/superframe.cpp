#include "lrwpan/superframe.hpp"

#include <cmath>
#include <string>

namespace lrwpan::mac {

void SuperframeConfig::validate() const {
  if (superframe_order < 0 || beacon_order < 0) {
    throw InvalidConfig("invalid-config: negative order");
  }
  if (beacon_order > kMaxBeaconOrder) {
    throw InvalidConfig("invalid-config: bo=" + std::to_string(beacon_order) + " exceeds 14");
  }
  if (superframe_order > beacon_order) {
    throw InvalidConfig("invalid-config: so=" + std::to_string(superframe_order) +
                        " > bo=" + std::to_string(beacon_order));
  }
}

double SuperframeConfig::duty_cycle() const {
  return std::ldexp(1.0, superframe_order - beacon_order);
}

SymbolTime SuperframeTimeline::backoff_boundary_at_or_after(SymbolTime t) const {
  if (t <= start) {
    return start;
  }
  const Symbols offset = t - start;
  const Symbols periods = (offset + kUnitBackoffPeriod - 1) / kUnitBackoffPeriod;
  return start + periods * kUnitBackoffPeriod;
}

Interval SuperframeTimeline::gts_interval(const GtsDescriptor& d) const {
  return Interval{start + d.start_slot * slot_duration, start + d.end_slot() * slot_duration};
}

SuperframeTimeline superframe_timeline(const SuperframeConfig& cfg, SymbolTime beacon_start,
                                       Symbols beacon_duration, int final_cap_slot) {
  cfg.validate();
  if (final_cap_slot < 0 || final_cap_slot >= kNumSuperframeSlots) {
    throw InvalidConfig("invalid-config: final CAP slot out of range");
  }
  SuperframeTimeline tl;
  tl.start = beacon_start;
  tl.slot_duration = cfg.slot_duration();
  tl.final_cap_slot = final_cap_slot;
  for (int i = 0; i < kNumSuperframeSlots; ++i) {
    tl.slot_boundaries[i] = beacon_start + static_cast<Symbols>(i) * tl.slot_duration;
  }
  const SymbolTime sd_end = beacon_start + cfg.superframe_duration();
  const SymbolTime cap_end = beacon_start + static_cast<Symbols>(final_cap_slot + 1) * tl.slot_duration;
  tl.beacon = Interval{beacon_start, beacon_start + beacon_duration};
  tl.cap = Interval{tl.beacon.end, cap_end};
  tl.cfp = Interval{cap_end, sd_end};
  tl.inactive = Interval{sd_end, beacon_start + cfg.beacon_interval()};
  return tl;
}

}  // namespace lrwpan::mac
