#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "steerkit/partition.hpp"

namespace steerkit {

enum class CriterionId {
  CvProduct,     // Delta_inf x_B * Delta_inf p_B < 1
  SpinSum2Obs,   // (Delta_inf sx_B)^2 + (Delta_inf sy_B)^2 < 1
  SpinSum3Obs,   // x, y and z inference variances, < 2
  CvFixedCombo,  // Delta(x_j - x_k) * Delta(p_j + p_k + p_m) < 1
};

std::string_view to_string(CriterionId id);
CriterionId criterion_from_string(std::string_view s);

/// Violation bound of the criterion: 2 for the three-observable sum, else 1.
double criterion_bound(CriterionId id);

/// Human-readable inequality, embedded in reports.
std::string_view criterion_inequality(CriterionId id);

enum class CriterionFamily { Product, Sum };
CriterionFamily family_of(CriterionId id);

/// Criteria built from two observables at the steered site.
bool is_two_observable(CriterionId id);

/// One evaluated steering inequality. `verdict` is true iff value < bound
/// (strict; equality is not a violation).
struct SteeringValue {
  CriterionId criterion = CriterionId::CvProduct;
  Partition partition;
  double value = 0.0;
  double bound = 1.0;
  bool verdict = false;
  std::string method;

  static SteeringValue make(CriterionId criterion, Partition partition, double value,
                            std::string method = {});

  friend bool operator==(const SteeringValue&, const SteeringValue&) = default;
};

} // namespace steerkit
