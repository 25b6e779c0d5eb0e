#pragma once

#include <string>
#include <vector>

#include "lrwpan/network.hpp"

namespace oracle {

/// Violations of the structural properties every run must satisfy, one
/// message each. Superframe geometry is recomputed here from the beacon
/// contents with plain arithmetic.
struct InvariantReport {
  std::vector<std::string> beacon_periodicity;
  std::vector<std::string> backoff_alignment;
  std::vector<std::string> gts_descriptors;
  std::vector<std::string> inactive_transmissions;
  std::vector<std::string> drop_conservation;
  std::vector<std::string> gts_collisions;
  std::uint64_t gts_windows_seen = 0;

  bool structural_ok() const {
    return beacon_periodicity.empty() && backoff_alignment.empty() && gts_descriptors.empty() &&
           inactive_transmissions.empty() && drop_conservation.empty();
  }
  std::string first_problem() const;
};

InvariantReport check_invariants(lrwpan::Network& net);

}  // namespace oracle
