#include "steerkit/steering_value.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace steerkit {

void Partition::validate(int n_sites) const {
  if (steering_group.empty()) throw std::invalid_argument("steering group is empty");
  if (target_site < 1 || target_site > n_sites) throw std::invalid_argument("target site out of range");
  std::vector<int> sorted = steering_group;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("steering group has duplicate sites");
  for (int s : sorted) {
    if (s < 1 || s > n_sites) throw std::invalid_argument("steering site out of range");
    if (s == target_site) throw std::invalid_argument("steering group contains the target");
  }
}

bool Partition::contains(int site) const {
  return std::find(steering_group.begin(), steering_group.end(), site) != steering_group.end();
}

std::string_view to_string(CriterionId id) {
  switch (id) {
  case CriterionId::CvProduct: return "CV_PRODUCT";
  case CriterionId::SpinSum2Obs: return "SPIN_SUM_2OBS";
  case CriterionId::SpinSum3Obs: return "SPIN_SUM_3OBS";
  case CriterionId::CvFixedCombo: return "CV_FIXED_COMBO";
  }
  return "?";
}

CriterionId criterion_from_string(std::string_view s) {
  for (auto id : {CriterionId::CvProduct, CriterionId::SpinSum2Obs, CriterionId::SpinSum3Obs,
                  CriterionId::CvFixedCombo})
    if (to_string(id) == s) return id;
  throw std::invalid_argument("unknown criterion id: " + std::string(s));
}

double criterion_bound(CriterionId id) { return id == CriterionId::SpinSum3Obs ? 2.0 : 1.0; }

std::string_view criterion_inequality(CriterionId id) {
  switch (id) {
  case CriterionId::CvProduct: return "Dinf_A(x_B) * Dinf_A(p_B) < 1";
  case CriterionId::SpinSum2Obs: return "Dinf_A(sx_B)^2 + Dinf_A(sy_B)^2 < 1";
  case CriterionId::SpinSum3Obs: return "Dinf_A(sx_B)^2 + Dinf_A(sy_B)^2 + Dinf_A(sz_B)^2 < 2";
  case CriterionId::CvFixedCombo: return "D(x_j - x_k) * D(p_j + p_k + p_m) < 1";
  }
  return "";
}

CriterionFamily family_of(CriterionId id) {
  switch (id) {
  case CriterionId::CvProduct:
  case CriterionId::CvFixedCombo: return CriterionFamily::Product;
  case CriterionId::SpinSum2Obs:
  case CriterionId::SpinSum3Obs: return CriterionFamily::Sum;
  }
  return CriterionFamily::Sum;
}

bool is_two_observable(CriterionId id) { return id != CriterionId::SpinSum3Obs; }

SteeringValue SteeringValue::make(CriterionId criterion, Partition partition, double value,
                                  std::string method) {
  SteeringValue v;
  v.criterion = criterion;
  v.partition = std::move(partition);
  v.value = value;
  v.bound = criterion_bound(criterion);
  v.verdict = value < v.bound;
  v.method = std::move(method);
  return v;
}

} // namespace steerkit
