#include "steerkit/criteria.hpp"

#include <stdexcept>

namespace steerkit {

namespace {

template <typename Evaluate>
CollectiveSteeringReport scan(int target, const std::vector<int>& full_group, Evaluate&& evaluate) {
  if (full_group.empty()) throw std::invalid_argument("collective scan needs a nonempty group");
  CollectiveSteeringReport r;
  r.full_group = evaluate(Partition{full_group, target});
  bool subsets_fail = true;
  for (const auto& subset : proper_subsets(full_group)) {
    r.subsets.push_back(evaluate(Partition{subset, target}));
    subsets_fail = subsets_fail && r.subsets.back().value >= 1.0 - kSubsetFloorTolerance;
  }
  r.collective = r.full_group.verdict && subsets_fail;
  return r;
}

} // namespace

CollectiveSteeringReport collective_scan(const qubit::DensityMatrix& rho, int target,
                                         const std::vector<int>& full_group, const CollectiveConfig& config) {
  Partition{full_group, target}.validate(rho.n_qubits());
  return scan(target, full_group,
              [&](const Partition& p) { return best_spin_two_obs(rho, p, config.pauli_menu); });
}

CollectiveSteeringReport collective_scan(const cv::GaussianState& state, int target,
                                         const std::vector<int>& full_group, const CollectiveConfig& config) {
  Partition{full_group, target}.validate(state.n_modes());
  return scan(target, full_group,
              [&](const Partition& p) { return best_cv_product(state, p, config.angle_grid); });
}

CollectiveSteeringReport collective_scan(const AnyState& state, int target, const std::vector<int>& full_group,
                                         const CollectiveConfig& config) {
  const Backend actual = std::holds_alternative<qubit::DensityMatrix>(state) ? Backend::Qubit : Backend::Cv;
  if (actual != config.backend) throw std::invalid_argument("state does not match the configured backend");
  return std::visit([&](const auto& s) { return collective_scan(s, target, full_group, config); }, state);
}

TripartiteScanReport pure_state_tripartite_scan(const qubit::DensityMatrix& rho, bool pure_asserted) {
  if (rho.n_qubits() != 3) throw std::invalid_argument("tripartite scan needs three qubits");
  const CollectiveConfig cfg;
  TripartiteScanReport r;
  r.pure_asserted = pure_asserted;
  bool all = true;
  for (int i = 1; i <= 3; ++i) {
    std::vector<int> group;
    for (int s = 1; s <= 3; ++s)
      if (s != i) group.push_back(s);
    r.per_site.push_back(best_spin_two_obs(rho, Partition{group, i}, cfg.pauli_menu));
    all = all && r.per_site.back().verdict;
  }
  r.genuine_under_purity = all;
  return r;
}

TripartiteScanReport pure_state_tripartite_scan(const cv::GaussianState& state, bool pure_asserted) {
  if (state.n_modes() != 3) throw std::invalid_argument("tripartite scan needs three modes");
  TripartiteScanReport r;
  r.pure_asserted = pure_asserted;
  r.per_site = {cv::s_j_fixed_combo(state, 1, 2, 3), cv::s_j_fixed_combo(state, 2, 1, 3),
                cv::s_j_fixed_combo(state, 3, 1, 2)};
  r.genuine_under_purity = r.per_site[0].verdict && r.per_site[1].verdict && r.per_site[2].verdict;
  return r;
}

} // namespace steerkit
