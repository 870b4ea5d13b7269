#include "steerkit/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <numbers>
#include <set>
#include <stdexcept>
#include <string>

namespace steerkit {

using qubit::DensityMatrix;
using qubit::DetectionModel;
using qubit::Pauli;
using qubit::PauliString;
using qubit::SpinComponent;

std::string_view to_string(Backend b) { return b == Backend::Qubit ? "qubit" : "cv"; }

Backend backend_from_string(std::string_view s) {
  if (s == "qubit") return Backend::Qubit;
  if (s == "cv") return Backend::Cv;
  throw std::invalid_argument("unknown backend: " + std::string(s));
}

namespace {

std::vector<int> others(int n, int target) {
  std::vector<int> g;
  for (int s = 1; s <= n; ++s)
    if (s != target) g.push_back(s);
  return g;
}

// Calls f(assignment) for every assignment of `choices` values to `slots` slots.
template <typename F>
void for_each_assignment(std::size_t slots, std::size_t choices, F&& f) {
  std::vector<std::size_t> idx(slots, 0);
  while (true) {
    f(idx);
    std::size_t k = 0;
    while (k < slots && ++idx[k] == choices) idx[k++] = 0;
    if (k == slots) return;
  }
}

} // namespace

SteeringValue spin_two_obs(const DensityMatrix& rho, const Partition& partition, const PauliString& predictor_x,
                           const PauliString& predictor_y, const DetectionModel& model) {
  partition.validate(rho.n_qubits());
  const int n = rho.n_qubits();
  const int b = partition.target_site;
  const double vx =
      qubit::inference_variance_with_loss(rho, partition, PauliString::single(n, b, Pauli::X), predictor_x, model);
  const double vy =
      qubit::inference_variance_with_loss(rho, partition, PauliString::single(n, b, Pauli::Y), predictor_y, model);
  return SteeringValue::make(CriterionId::SpinSum2Obs, partition, vx + vy, "fixed-predictor");
}

SteeringValue spin_three_obs(const DensityMatrix& rho, const Partition& partition, const PauliString& predictor_x,
                             const PauliString& predictor_y, const PauliString& predictor_z,
                             const DetectionModel& model) {
  partition.validate(rho.n_qubits());
  const int n = rho.n_qubits();
  const int b = partition.target_site;
  double total = 0.0;
  const std::pair<Pauli, const PauliString*> terms[] = {
      {Pauli::X, &predictor_x}, {Pauli::Y, &predictor_y}, {Pauli::Z, &predictor_z}};
  for (const auto& [label, predictor] : terms)
    total += qubit::inference_variance_with_loss(rho, partition, PauliString::single(n, b, label), *predictor, model);
  return SteeringValue::make(CriterionId::SpinSum3Obs, partition, total, "fixed-predictor");
}

SteeringValue ghz_two_obs(const DensityMatrix& rho, int target, const DetectionModel& model) {
  const int n = rho.n_qubits();
  return spin_two_obs(rho, Partition{others(n, target), target},
                      qubit::ghz_predictor_for_target(n, target, SpinComponent::X),
                      qubit::ghz_predictor_for_target(n, target, SpinComponent::Y), model);
}

SteeringValue ghz_three_obs(const DensityMatrix& rho, int target, const DetectionModel& model) {
  const int n = rho.n_qubits();
  return spin_three_obs(rho, Partition{others(n, target), target},
                        qubit::ghz_predictor_for_target(n, target, SpinComponent::X),
                        qubit::ghz_predictor_for_target(n, target, SpinComponent::Y),
                        qubit::ghz_predictor_for_target(n, target, SpinComponent::Z), model);
}

SteeringValue best_spin_two_obs(const DensityMatrix& rho, const Partition& partition, std::span<const Pauli> menu) {
  partition.validate(rho.n_qubits());
  if (menu.empty()) throw std::invalid_argument("empty Pauli menu");
  const int n = rho.n_qubits();
  const std::size_t slots = partition.steering_group.size();
  double total = 0.0;
  for (Pauli component : {Pauli::X, Pauli::Y}) {
    const PauliString target = PauliString::single(n, partition.target_site, component);
    double best = std::numeric_limits<double>::infinity();
    std::vector<Pauli> settings(slots);
    for_each_assignment(slots, menu.size(), [&](const std::vector<std::size_t>& idx) {
      for (std::size_t i = 0; i < slots; ++i) settings[i] = menu[idx[i]];
      best = std::min(best, qubit::optimal_inference_variance(rho, partition, target, settings));
    });
    total += best;
  }
  return SteeringValue::make(CriterionId::SpinSum2Obs, partition, total, "optimal-estimator");
}

SteeringValue best_cv_product(const cv::GaussianState& state, const Partition& partition, int angle_grid) {
  partition.validate(state.n_modes());
  if (angle_grid < 1) throw std::invalid_argument("angle grid needs at least one angle");
  const int n = state.n_modes();
  const std::size_t slots = partition.steering_group.size();
  std::vector<double> angles(static_cast<std::size_t>(angle_grid));
  for (int k = 0; k < angle_grid; ++k) angles[static_cast<std::size_t>(k)] = std::numbers::pi * k / angle_grid;

  auto best_for = [&](const cv::QuadratureCombo& target) {
    double best = std::numeric_limits<double>::infinity();
    cv::HomodynePlan plan{partition.steering_group, std::vector<double>(slots)};
    for_each_assignment(slots, angles.size(), [&](const std::vector<std::size_t>& idx) {
      for (std::size_t i = 0; i < slots; ++i) plan.angles[i] = angles[idx[i]];
      best = std::min(best, cv::optimal_conditional_variance(state, target, plan));
    });
    return best;
  };
  const double vx = best_for(cv::QuadratureCombo::x(n, partition.target_site));
  const double vp = best_for(cv::QuadratureCombo::p(n, partition.target_site));
  return SteeringValue::make(CriterionId::CvProduct, partition, std::sqrt(vx) * std::sqrt(vp),
                             "optimal-gain, " + std::to_string(angle_grid) + "-angle grid");
}

GenuineSteeringReport result4_aggregate(std::span<const SteeringValue> values, std::string method_notes) {
  if (values.size() != 3) throw std::invalid_argument("tripartite aggregation needs exactly three values");
  const CriterionFamily fam = family_of(values[0].criterion);
  std::set<int> targets;
  for (const auto& v : values) {
    if (family_of(v.criterion) != fam) throw std::invalid_argument("cannot mix product and sum criteria");
    if (v.bound != 1.0) throw std::invalid_argument("aggregated criteria must have bound 1");
    targets.insert(v.partition.target_site);
  }
  if (targets.size() != 3) throw std::invalid_argument("aggregated values must target three distinct parties");

  GenuineSteeringReport r;
  r.values.assign(values.begin(), values.end());
  r.sum = values[0].value + values[1].value + values[2].value;
  r.genuine = r.sum < 1.0;
  if (method_notes.empty()) method_notes = values[0].method;
  r.method_notes = std::move(method_notes);
  return r;
}

GenuineSteeringReport ghz_result4(const DensityMatrix& rho, const DetectionModel& model) {
  if (rho.n_qubits() != 3) throw std::invalid_argument("tripartite aggregation needs three qubits");
  const SteeringValue v[] = {ghz_two_obs(rho, 1, model), ghz_two_obs(rho, 2, model), ghz_two_obs(rho, 3, model)};
  return result4_aggregate(v, "fixed GHZ predictors");
}

GenuineSteeringReport ghz_result4_optimal(const DensityMatrix& rho) {
  if (rho.n_qubits() != 3) throw std::invalid_argument("tripartite aggregation needs three qubits");
  const CollectiveConfig cfg;
  std::vector<SteeringValue> v;
  for (int i = 1; i <= 3; ++i) v.push_back(best_spin_two_obs(rho, Partition{others(3, i), i}, cfg.pauli_menu));
  return result4_aggregate(v, "optimal estimators over Pauli menu");
}

GenuineSteeringReport cv_result4(const cv::GaussianState& state) {
  if (state.n_modes() != 3) throw std::invalid_argument("tripartite aggregation needs three modes");
  const SteeringValue v[] = {cv::s_j_fixed_combo(state, 1, 2, 3), cv::s_j_fixed_combo(state, 2, 1, 3),
                             cv::s_j_fixed_combo(state, 3, 1, 2)};
  return result4_aggregate(v, "unit-gain fixed combinations");
}

GenuineSteeringReport cv_result4_optimal(const cv::GaussianState& state) {
  if (state.n_modes() != 3) throw std::invalid_argument("tripartite aggregation needs three modes");
  const SteeringValue v[] = {cv::s_j_optimal_gain(state, 1, 2, 3), cv::s_j_optimal_gain(state, 2, 1, 3),
                             cv::s_j_optimal_gain(state, 3, 1, 2)};
  return result4_aggregate(v, "optimal gains on the same quadratures");
}

MonogamyResult monogamy_check(const SteeringValue& s_ba, const SteeringValue& s_bc) {
  if (s_ba.partition.target_site != s_bc.partition.target_site)
    throw std::invalid_argument("monogamy compares steering of one target");
  for (int s : s_ba.partition.steering_group)
    if (s_bc.partition.contains(s)) throw std::invalid_argument("steering groups overlap");
  if (!is_two_observable(s_ba.criterion) || !is_two_observable(s_bc.criterion))
    throw std::invalid_argument("monogamy applies to two-observable criteria");

  MonogamyResult m;
  m.product = s_ba.value * s_bc.value;
  m.satisfied = m.product >= 1.0 - kMonogamyTolerance;
  m.sum = s_ba.value + s_bc.value;
  m.exclusive = !(s_ba.verdict && s_bc.verdict);
  return m;
}

std::vector<std::vector<int>> proper_subsets(const std::vector<int>& group) {
  const std::size_t k = group.size();
  if (k == 0 || k > 20) throw std::invalid_argument("group size out of range");
  std::vector<std::vector<int>> out;
  const std::size_t full = (std::size_t{1} << k) - 1;
  for (std::size_t mask = 1; mask < full; ++mask) {
    std::vector<int> s;
    for (std::size_t i = 0; i < k; ++i)
      if (mask & (std::size_t{1} << i)) s.push_back(group[i]);
    out.push_back(std::move(s));
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  return out;
}

} // namespace steerkit
