#pragma once

#include <vector>

namespace steerkit {

/// A steering group and the single site (qubit) or mode (CV) it steers.
/// Sites are numbered from 1.
struct Partition {
  std::vector<int> steering_group;
  int target_site = 0;

  /// Throws std::invalid_argument when the group is empty or has duplicates,
  /// a site is outside 1..n_sites, or the group contains the target.
  void validate(int n_sites) const;

  bool contains(int site) const;

  friend bool operator==(const Partition&, const Partition&) = default;
};

} // namespace steerkit
