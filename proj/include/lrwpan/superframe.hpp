#pragma once

#include <array>
#include <stdexcept>

#include "lrwpan/frame.hpp"
#include "lrwpan/time.hpp"

namespace lrwpan::mac {

// MAC constants and PIB defaults for the beacon-enabled 2.4 GHz mode.
inline constexpr Symbols kBaseSlotDuration = 60;
inline constexpr int kNumSuperframeSlots = 16;
inline constexpr Symbols kBaseSuperframeDuration = kBaseSlotDuration * kNumSuperframeSlots;
inline constexpr Symbols kUnitBackoffPeriod = 20;
inline constexpr int kMinBe = 3;
inline constexpr int kMaxBe = 5;
inline constexpr int kMaxCsmaBackoffs = 5;
inline constexpr int kMaxFrameRetries = 3;
inline constexpr int kMaxGts = 7;
inline constexpr Symbols kMinCapLength = 440;
inline constexpr Symbols kCcaDuration = 8;
inline constexpr Symbols kTurnaroundTime = 12;
inline constexpr Symbols kAckWaitDuration = 54;
inline constexpr int kMaxLostBeacons = 4;
inline constexpr int kGtsDescPersistenceTime = 4;
inline constexpr Symbols kResponseWaitTime = 32 * kBaseSuperframeDuration;
inline constexpr Symbols kSifsPeriod = 12;
inline constexpr Symbols kLifsPeriod = 40;
inline constexpr std::size_t kMaxSifsFrameSize = 18;
inline constexpr int kMaxBeaconOrder = 14;

static_assert(kBaseSuperframeDuration == 960);

/// Symbols occupied by an acknowledged exchange after the frame itself:
/// turnaround plus the acknowledgment's air time.
inline constexpr Symbols kAckExchange = kTurnaroundTime + airtime(kAckFrameBytes);

/// Interframe spacing that must follow a frame of `bytes` octets.
constexpr Symbols ifs_after(std::size_t bytes) {
  return bytes > kMaxSifsFrameSize ? kLifsPeriod : kSifsPeriod;
}

class InvalidConfig : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SuperframeConfig {
  int beacon_order = 3;
  int superframe_order = 3;
  bool battery_life_extension = false;

  /// Throws InvalidConfig unless 0 <= so <= bo <= 14.
  void validate() const;

  Symbols superframe_duration() const { return kBaseSuperframeDuration << superframe_order; }
  Symbols beacon_interval() const { return kBaseSuperframeDuration << beacon_order; }
  Symbols slot_duration() const { return kBaseSlotDuration << superframe_order; }
  /// SD / BI as a fraction in (0, 1].
  double duty_cycle() const;
};

struct Interval {
  SymbolTime begin;
  SymbolTime end;

  Symbols length() const { return end - begin; }
  bool contains(SymbolTime t) const { return t >= begin && t < end; }
  bool overlaps(const Interval& o) const { return begin < o.end && o.begin < end; }
};

/// Absolute layout of one superframe.
struct SuperframeTimeline {
  SymbolTime start;  // beacon transmission start, slot 0 boundary
  Interval beacon;
  Interval cap;
  Interval cfp;
  Interval inactive;
  std::array<SymbolTime, kNumSuperframeSlots> slot_boundaries{};
  Symbols slot_duration = 0;
  int final_cap_slot = kNumSuperframeSlots - 1;

  /// First backoff-period boundary at or after t, aligned to the
  /// superframe start.
  SymbolTime backoff_boundary_at_or_after(SymbolTime t) const;
  Interval gts_interval(const GtsDescriptor& d) const;
  SymbolTime active_end() const { return inactive.begin; }
  SymbolTime next_start() const { return inactive.end; }
};

/// Layout of the superframe whose beacon starts at `beacon_start`.
/// Throws InvalidConfig for invalid orders or a final CAP slot outside [0, 15].
SuperframeTimeline superframe_timeline(const SuperframeConfig& cfg, SymbolTime beacon_start,
                                       Symbols beacon_duration, int final_cap_slot = 15);

}  // namespace lrwpan::mac
