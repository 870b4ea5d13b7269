#pragma once

#include <string>
#include <vector>

namespace steerkit {

struct SelftestCheck {
  std::string name;
  double expected = 0.0;
  double actual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

/// Golden values for every module, checked against closed forms. Boolean
/// checks use 1 for true and 0 for false with zero tolerance.
std::vector<SelftestCheck> run_selftest();

} // namespace steerkit
