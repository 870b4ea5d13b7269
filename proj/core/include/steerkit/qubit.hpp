#pragma once

#include <complex>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "steerkit/partition.hpp"
#include "steerkit/pauli.hpp"

namespace steerkit::qubit {

/// Largest register the dense backend accepts.
inline constexpr int kMaxQubits = 14;

inline constexpr double kNormTolerance = 1e-10;
inline constexpr double kHermitianTolerance = 1e-10;
inline constexpr double kTraceTolerance = 1e-10;
inline constexpr double kEigenvalueFloor = -1e-9;

class PureState {
public:
  /// Throws std::invalid_argument unless the length is 2^n and the norm is 1.
  explicit PureState(Eigen::VectorXcd amplitudes);

  int n_qubits() const { return n_qubits_; }
  const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
  std::complex<double> amplitude(std::size_t index) const { return amplitudes_(static_cast<Eigen::Index>(index)); }

private:
  int n_qubits_;
  Eigen::VectorXcd amplitudes_;
};

class DensityMatrix {
public:
  /// Validates Hermiticity, unit trace and positivity.
  explicit DensityMatrix(Eigen::MatrixXcd entries);
  DensityMatrix(const PureState& psi);  // NOLINT: a pure state is a density matrix

  int n_qubits() const { return n_qubits_; }
  Eigen::Index dim() const { return entries_.rows(); }
  const Eigen::MatrixXcd& entries() const { return entries_; }

  static DensityMatrix maximally_mixed(int n_qubits);

  /// Max |rho - rho^dagger|, |Tr rho - 1| and the smallest eigenvalue.
  struct Diagnostics {
    double hermiticity_error;
    double trace_error;
    double min_eigenvalue;
  };
  Diagnostics diagnose() const;

private:
  struct Trusted {};
  DensityMatrix(Eigen::MatrixXcd entries, Trusted);

  int n_qubits_;
  Eigen::MatrixXcd entries_;

  friend DensityMatrix depolarize_global(const DensityMatrix&, double);
  friend DensityMatrix apply_kraus(const DensityMatrix&, std::span<const Eigen::MatrixXcd>);
};

using SitePartition = steerkit::Partition;

/// What the estimator reports when group A registers no click.
struct MarginalMean {
  friend bool operator==(const MarginalMean&, const MarginalMean&) = default;
};
struct ConstantGuess {
  double value = 0.0;
  friend bool operator==(const ConstantGuess&, const ConstantGuess&) = default;
};
using NoClickPolicy = std::variant<MarginalMean, ConstantGuess>;

/// Collective click/no-click of the whole steering group with probability
/// `efficiency`.
struct DetectionModel {
  double efficiency = 1.0;
  NoClickPolicy no_click = MarginalMean{};

  void validate() const;
};

enum class SpinComponent { X, Y, Z };

PureState ghz(int n);
PureState basis_state(int n, std::uint64_t index);

/// Product of Paulis on sites 1..n-1 that predicts sigma_component on site n
/// perfectly for ghz(n).
PauliString ghz_predictor(int n, SpinComponent component);

/// Same as ghz_predictor, with site n moved to `target` and the remaining
/// sites filled in ascending order. Valid because ghz(n) is permutation
/// symmetric.
PauliString ghz_predictor_for_target(int n, int target, SpinComponent component);

Pauli to_pauli(SpinComponent c);

double expectation(const DensityMatrix& rho, const PauliString& obs);
double expectation(const PureState& psi, const PauliString& obs);

/// Var(T - P) for commuting T (target) and P (predictor) with disjoint supports.
double variance_of_difference(const DensityMatrix& rho, const PauliString& target,
                              const PauliString& predictor);

DensityMatrix depolarize_global(const DensityMatrix& rho, double p);

/// sum_k K rho K^dagger. The Kraus set must satisfy sum K^dagger K = 1 within 1e-10.
DensityMatrix apply_kraus(const DensityMatrix& rho, std::span<const Eigen::MatrixXcd> kraus);

/// Joint outcome distribution of commuting single-site Pauli measurements.
/// `labels[i]` is measured on `sites[i]`; outcome bit i set means result -1.
std::vector<double> joint_distribution(const DensityMatrix& rho, std::span<const int> sites,
                                       std::span<const Pauli> labels);

/// Sum_a P(a) Var(T | a): the mean-squared error of the best real-valued
/// estimator of T built from the outcomes of `settings` on the steering group.
double optimal_inference_variance(const DensityMatrix& rho, const SitePartition& partition,
                                  const PauliString& target, std::span<const Pauli> settings);

/// Var(T - P~) where P~ is the predictor outcome when group A clicks
/// (probability eta) and the no-click policy value otherwise.
double inference_variance_with_loss(const DensityMatrix& rho, const SitePartition& partition,
                                    const PauliString& target, const PauliString& predictor,
                                    const DetectionModel& model);

/// Partial transpose on the given sites, used for the PPT entanglement test.
Eigen::MatrixXcd partial_transpose(const DensityMatrix& rho, std::span<const int> sites);

} // namespace steerkit::qubit
