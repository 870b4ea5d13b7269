#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "steerkit/gaussian.hpp"
#include "steerkit/qubit.hpp"
#include "steerkit/steering_value.hpp"

namespace steerkit {

enum class Backend { Qubit, Cv };
std::string_view to_string(Backend b);
Backend backend_from_string(std::string_view s);

using AnyState = std::variant<qubit::DensityMatrix, cv::GaussianState>;

/// Three per-target values aggregated into the tripartite sum test:
/// genuine iff S1 + S2 + S3 < 1.
struct GenuineSteeringReport {
  std::vector<SteeringValue> values;
  double sum = 0.0;
  bool genuine = false;
  std::string method_notes;

  friend bool operator==(const GenuineSteeringReport&, const GenuineSteeringReport&) = default;
};

/// Full-group value plus the best value of every nonempty proper subset.
/// collective iff the full group steers and every proper subset value is at
/// least 1 - kSubsetFloorTolerance. Subsets of a pure resource often saturate
/// the bound exactly, so their raw values can sit a few ulps below 1.
struct CollectiveSteeringReport {
  SteeringValue full_group;
  std::vector<SteeringValue> subsets;
  bool collective = false;

  friend bool operator==(const CollectiveSteeringReport&, const CollectiveSteeringReport&) = default;
};

struct MonogamyResult {
  double product = 0.0;
  /// product >= 1 - 1e-9
  bool satisfied = false;
  double sum = 0.0;
  /// The two groups do not both violate their inequality.
  bool exclusive = false;
};

struct TripartiteScanReport {
  std::vector<SteeringValue> per_site;
  bool pure_asserted = true;
  bool genuine_under_purity = false;
};

/// Settings menu for "best available strategy" evaluations.
struct CollectiveConfig {
  Backend backend = Backend::Qubit;
  std::vector<qubit::Pauli> pauli_menu{qubit::Pauli::X, qubit::Pauli::Y, qubit::Pauli::Z};
  int angle_grid = 36;
};

inline constexpr double kMonogamyTolerance = 1e-9;
inline constexpr double kSubsetFloorTolerance = 1e-9;

// --- spin criteria ---------------------------------------------------------

/// Sum of the x and y difference variances with fixed predictors, optionally
/// under a detection-loss model on the steering group.
SteeringValue spin_two_obs(const qubit::DensityMatrix& rho, const Partition& partition,
                           const qubit::PauliString& predictor_x, const qubit::PauliString& predictor_y,
                           const qubit::DetectionModel& model = {});

SteeringValue spin_three_obs(const qubit::DensityMatrix& rho, const Partition& partition,
                             const qubit::PauliString& predictor_x, const qubit::PauliString& predictor_y,
                             const qubit::PauliString& predictor_z, const qubit::DetectionModel& model = {});

/// spin_two_obs for `target` of a GHZ-type register with the canonical
/// predictors on all other sites.
SteeringValue ghz_two_obs(const qubit::DensityMatrix& rho, int target, const qubit::DetectionModel& model = {});
SteeringValue ghz_three_obs(const qubit::DensityMatrix& rho, int target, const qubit::DetectionModel& model = {});

/// Best two-observable sum over the Pauli menu on every steering site, with
/// conditional-mean estimators.
SteeringValue best_spin_two_obs(const qubit::DensityMatrix& rho, const Partition& partition,
                                std::span<const qubit::Pauli> menu);

/// Best CV product over homodyne angles k*pi/grid on each steering mode, with
/// optimal gains.
SteeringValue best_cv_product(const cv::GaussianState& state, const Partition& partition, int angle_grid);

// --- aggregation ------------------------------------------------------------

/// Throws std::invalid_argument unless there are three values with distinct
/// targets, a common family (all products or all sums) and bound 1.
GenuineSteeringReport result4_aggregate(std::span<const SteeringValue> values, std::string method_notes = {});

/// Fixed GHZ predictors for targets 1, 2, 3.
GenuineSteeringReport ghz_result4(const qubit::DensityMatrix& rho, const qubit::DetectionModel& model = {});
/// Best Pauli-menu estimators for targets 1, 2, 3.
GenuineSteeringReport ghz_result4_optimal(const qubit::DensityMatrix& rho);
/// Unit-gain fixed combinations S_1, S_2, S_3.
GenuineSteeringReport cv_result4(const cv::GaussianState& state);
/// Same quadratures with optimal gains.
GenuineSteeringReport cv_result4_optimal(const cv::GaussianState& state);

/// Throws when the targets differ, the groups overlap, or either value is
/// not a two-observable criterion.
MonogamyResult monogamy_check(const SteeringValue& s_ba, const SteeringValue& s_bc);

// --- scans ------------------------------------------------------------------

CollectiveSteeringReport collective_scan(const qubit::DensityMatrix& rho, int target,
                                         const std::vector<int>& full_group, const CollectiveConfig& config = {});
CollectiveSteeringReport collective_scan(const cv::GaussianState& state, int target,
                                         const std::vector<int>& full_group, const CollectiveConfig& config = {});
/// Dispatches on the state; throws when config.backend names the other one.
CollectiveSteeringReport collective_scan(const AnyState& state, int target, const std::vector<int>& full_group,
                                         const CollectiveConfig& config);

/// Steering of each site by the other two. The caller asserts purity.
TripartiteScanReport pure_state_tripartite_scan(const qubit::DensityMatrix& rho, bool pure_asserted = true);
TripartiteScanReport pure_state_tripartite_scan(const cv::GaussianState& state, bool pure_asserted = true);

/// All nonempty proper subsets of `group`, by increasing size then
/// lexicographically.
std::vector<std::vector<int>> proper_subsets(const std::vector<int>& group);

} // namespace steerkit
