#include "lrwpan/gts.hpp"

#include <algorithm>

namespace lrwpan::mac {

std::optional<GtsDescriptor> GtsTable::find(Address dev, GtsDirection direction) const {
  for (const auto& d : list_) {
    if (d.dev_addr == dev && d.direction == direction) {
      return d;
    }
  }
  return std::nullopt;
}

int GtsTable::final_cap_slot() const {
  int lowest = kNumSuperframeSlots;
  for (const auto& d : list_) {
    lowest = std::min(lowest, d.start_slot);
  }
  return lowest - 1;
}

int GtsTable::allocated_slots() const {
  int n = 0;
  for (const auto& d : list_) {
    n += d.length;
  }
  return n;
}

GtsAllocation GtsTable::allocate(Address dev, int length, GtsDirection direction) {
  if (auto existing = find(dev, direction)) {
    return GtsAllocation{existing, {}};
  }
  if (length < 1 || length >= kNumSuperframeSlots) {
    return GtsAllocation{std::nullopt, length < 1 ? GtsDenial::kInvalidLength
                                                  : GtsDenial::kCapTooShort};
  }
  if (static_cast<int>(list_.size()) >= kMaxGts) {
    return GtsAllocation{std::nullopt, GtsDenial::kTableFull};
  }
  const int start = final_cap_slot() + 1 - length;
  const Symbols cap_length = static_cast<Symbols>(start) * cfg_.slot_duration();
  if (start < 1 || cap_length < kMinCapLength) {
    return GtsAllocation{std::nullopt, GtsDenial::kCapTooShort};
  }
  GtsDescriptor d{dev, start, length, direction};
  list_.push_back(d);
  return GtsAllocation{d, {}};
}

bool GtsTable::deallocate(Address dev, GtsDirection direction) {
  auto it = std::find_if(list_.begin(), list_.end(), [&](const GtsDescriptor& d) {
    return d.dev_addr == dev && d.direction == direction;
  });
  if (it == list_.end()) {
    return false;
  }
  list_.erase(it);
  repack();
  return true;
}

void GtsTable::repack() {
  int next_end = kNumSuperframeSlots;
  for (auto& d : list_) {
    d.start_slot = next_end - d.length;
    next_end = d.start_slot;
  }
}

bool gts_can_carry(int length, const SuperframeConfig& cfg, std::size_t frame_bytes) {
  const Symbols window = static_cast<Symbols>(length) * cfg.slot_duration();
  return airtime(frame_bytes) + kAckExchange <= window;
}

}  // namespace lrwpan::mac
