#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string_view>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "steerkit/criteria.hpp"

namespace steerkit {

/// No verdict flip inside the requested bracket.
class NoThresholdError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kThresholdTolerance = 1e-4;

struct ThresholdResult {
  std::string scenario;
  std::string parameter;
  CriterionId criterion = CriterionId::SpinSum3Obs;
  double bound = 2.0;
  double critical = 0.0;
  double low = 0.0;
  double high = 0.0;
  int iterations = 0;

  friend bool operator==(const ThresholdResult&, const ThresholdResult&) = default;
};

/// One point of the eavesdropper sweep: steering of mode 1 by A' = {2', 3'}
/// and by the eavesdropper E = {4, 5}.
struct EavesdropRecord {
  double r = 0.0;
  double eta = 0.0;
  SteeringValue a_prime;
  SteeringValue eavesdropper;
  double monogamy_product = 0.0;
  bool monogamy_satisfied = false;

  friend bool operator==(const EavesdropRecord&, const EavesdropRecord&) = default;
};

struct EavesdropSweep {
  std::vector<EavesdropRecord> records;
  /// A' value never decreases as eta decreases along the grid.
  bool monotone = false;
};

struct ShotEstimate {
  CriterionId criterion = CriterionId::SpinSum2Obs;
  Partition partition;
  double bound = 1.0;
  double estimate = 0.0;
  double standard_error = 0.0;
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const ShotEstimate&, const ShotEstimate&) = default;
};

struct MonogamyRecord {
  CriterionId criterion = CriterionId::CvProduct;
  int target = 0;
  std::vector<int> group_a;
  std::vector<int> group_c;
  double value_a = 0.0;
  double value_c = 0.0;
  double product = 0.0;
  bool satisfied = false;
  bool exclusive = false;

  friend bool operator==(const MonogamyRecord&, const MonogamyRecord&) = default;
};

struct SecretSharingReport {
  Backend backend = Backend::Qubit;
  int n = 3;
  double r = 0.0;
  std::vector<CollectiveSteeringReport> per_target;
  std::vector<MonogamyRecord> monogamy;
  bool all_collective = false;
  double min_subset_value = 0.0;

  friend bool operator==(const SecretSharingReport&, const SecretSharingReport&) = default;
};

// --- single-point scenarios --------------------------------------------------

struct QubitGhzParams {
  int n = 3;
  double noise_p = 1.0;  // weight of ghz(n) in p*ghz + (1-p)*I/2^n
  qubit::DetectionModel model;
  std::string criterion = "two-obs";  // two-obs | three-obs | result4
  int target = 0;                      // 0 means site n
};

struct CvGhzParams {
  double r = 0.0;
  std::string criterion = "eq6";  // eq2 | eq6 | result4
  int target = 1;
};

using PointResult = std::variant<SteeringValue, GenuineSteeringReport, EavesdropRecord, ShotEstimate>;

qubit::DensityMatrix noisy_ghz(int n, double noise_p);

PointResult run_qubit_ghz(const QubitGhzParams& params);
PointResult run_cv_ghz(const CvGhzParams& params);

// --- sweeps -------------------------------------------------------------------

/// Declarative sweep. Scenarios: "ghz" (qubit; parameters n, noise_p, eta,
/// guess, target), "cv-ghz" (cv; r, target), "eavesdrop" (cv; r, eta).
struct SweepConfig {
  Backend backend = Backend::Qubit;
  std::string scenario = "ghz";
  std::string parameter;
  std::vector<double> grid;
  std::string criterion = "two-obs";
  std::string policy = "marginal-mean";
  std::map<std::string, double> fixed;
  std::uint64_t seed = 0;
  std::uint64_t shots = 0;  // 0 evaluates exactly

  /// Throws std::invalid_argument for an empty or non-increasing grid, an
  /// unknown scenario/parameter/criterion, or a backend mismatch.
  void validate() const;
};

struct SweepRecord {
  std::size_t index = 0;
  std::string parameter;
  double parameter_value = 0.0;
  PointResult result;

  friend bool operator==(const SweepRecord&, const SweepRecord&) = default;
};

/// Grid points run concurrently; records come back in grid order. Each point
/// draws from the substream CounterRng::derive(seed, index).
std::vector<SweepRecord> run_sweep(const SweepConfig& config, unsigned threads = 0);

/// start, start+step, ... up to stop (inclusive within 1e-9 * step). Throws
/// unless step > 0 and stop >= start.
std::vector<double> parse_grid(std::string_view spec);

// --- named scenarios ---------------------------------------------------------

/// Collaborators steer every target of the three-party GHZ resource; no
/// proper subset does.
SecretSharingReport secret_sharing_demo(Backend backend, int n, double r = 1.0);

EavesdropSweep eavesdrop_sweep(double r, const std::vector<double>& eta_grid);
EavesdropRecord eavesdrop_point(double r, double eta);

/// Bisection for the flip of a caller-declared monotone verdict. Throws
/// NoThresholdError when verdict(low) == verdict(high).
ThresholdResult find_threshold(std::string parameter, double low, double high,
                               const std::function<bool(double)>& verdict, double tolerance = kThresholdTolerance);

/// Named threshold searches: three-obs-eta, two-obs-eta (GHZ(3) under the
/// given no-click policy), cv-eq6-r, cv-result4-r.
ThresholdResult threshold_scenario(const std::string& name, const qubit::NoClickPolicy& policy = qubit::MarginalMean{},
                                   double tolerance = kThresholdTolerance);
std::vector<std::string> threshold_scenario_names();

// --- finite-shot emulation ------------------------------------------------------

/// Criterion to emulate: SpinSum2Obs (fixed GHZ predictors for `target`) on
/// a qubit state, or CvFixedCombo (S_target) on a three-mode Gaussian state.
struct ShotConfig {
  CriterionId criterion = CriterionId::SpinSum2Obs;
  int target = 0;  // 0 means last site for qubits, mode 1 for CV
};

/// Plug-in estimate from `shots` samples per measured observable, drawn from
/// the exact outcome distribution. Deterministic in (seed, shots).
ShotEstimate simulate_shots(const AnyState& state, const ShotConfig& config, std::uint64_t shots, std::uint64_t seed);

} // namespace steerkit
