#pragma once

#include <optional>
#include <vector>

#include "lrwpan/frame.hpp"
#include "lrwpan/superframe.hpp"

namespace lrwpan::mac {

enum class GtsDenial { kTableFull, kCapTooShort, kInvalidLength };

/// Outcome of an allocation request: a descriptor or the reason it was refused.
struct GtsAllocation {
  std::optional<GtsDescriptor> descriptor;
  GtsDenial denial = GtsDenial::kTableFull;

  bool granted() const { return descriptor.has_value(); }
};

/// Coordinator-side GTS bookkeeping. Slots are handed out first-come
/// first-served from the end of the superframe, growing toward the CAP.
class GtsTable {
 public:
  explicit GtsTable(SuperframeConfig cfg) : cfg_(cfg) {}

  /// A repeat request from a device that already holds a GTS in the same
  /// direction returns the existing descriptor.
  GtsAllocation allocate(Address dev, int length, GtsDirection direction);
  /// Removes the descriptor and packs the remaining ones toward slot 15.
  bool deallocate(Address dev, GtsDirection direction);

  const std::vector<GtsDescriptor>& descriptors() const { return list_; }
  std::optional<GtsDescriptor> find(Address dev, GtsDirection direction) const;
  /// 15 when nothing is allocated.
  int final_cap_slot() const;
  int allocated_slots() const;

 private:
  void repack();

  SuperframeConfig cfg_;
  std::vector<GtsDescriptor> list_;  // allocation order
};

/// True if a frame of `frame_bytes` plus its acknowledgment fits in a GTS
/// of `length` slots at superframe order `so`.
bool gts_can_carry(int length, const SuperframeConfig& cfg, std::size_t frame_bytes);

}  // namespace lrwpan::mac
