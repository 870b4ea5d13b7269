#pragma once

#include <vector>

#include <Eigen/Dense>

#include "steerkit/steering_value.hpp"

namespace steerkit::cv {

inline constexpr double kSymmetryTolerance = 1e-10;
inline constexpr double kPhysicalityFloor = 1.0 - 1e-9;
inline constexpr double kSymplecticTolerance = 1e-10;
/// Eigenvalues of the measured-quadrature covariance below this are treated
/// as zero by the pseudo-inverse.
inline constexpr double kPseudoInverseCutoff = 1e-12;

/// Mean and covariance of N bosonic modes, ordered x1, p1, ..., xN, pN.
///
/// Vacuum covariance is the identity, so every physical state satisfies
/// Var(x) Var(p) >= 1 and has symplectic eigenvalues >= 1. Modes are numbered
/// from 1.
class GaussianState {
public:
  /// Throws std::invalid_argument when the covariance is not symmetric within
  /// 1e-10 or any symplectic eigenvalue is below 1 - 1e-9.
  GaussianState(Eigen::VectorXd mean, Eigen::MatrixXd cov);

  int n_modes() const { return static_cast<int>(mean_.size() / 2); }
  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& cov() const { return cov_; }

  double var_x(int mode) const;
  double var_p(int mode) const;

private:
  // Outputs of symplectic maps, loss and reductions are physical by
  // construction. Re-checking them would reject strongly squeezed states on
  // roundoff alone (the error in nu grows like e^{4r} * eps).
  struct Trusted {};
  GaussianState(Eigen::VectorXd mean, Eigen::MatrixXd cov, Trusted);

  Eigen::VectorXd mean_;
  Eigen::MatrixXd cov_;

  friend GaussianState apply_symplectic(const GaussianState&, const Eigen::MatrixXd&);
  friend GaussianState loss_channel(const GaussianState&, int, double);
  friend GaussianState append_vacuum(const GaussianState&, int);
  friend GaussianState reduce(const GaussianState&, const std::vector<int>&);
};

GaussianState apply_symplectic(const GaussianState& state, const Eigen::MatrixXd& s);
GaussianState loss_channel(const GaussianState& state, int mode, double eta);
GaussianState append_vacuum(const GaussianState& state, int count);
GaussianState reduce(const GaussianState& state, const std::vector<int>& modes);

/// Omega = diag(J, ..., J) with J = [[0, 1], [-1, 0]].
Eigen::MatrixXd symplectic_form(int n_modes);

/// Symplectic spectrum of a covariance matrix, ascending, one value per mode.
Eigen::VectorXd symplectic_eigenvalues(const Eigen::MatrixXd& cov);

/// max |S Omega S^T - Omega|.
double symplectic_defect(const Eigen::MatrixXd& s);

Eigen::MatrixXd squeeze_transform(int n_modes, int mode, double r, double angle);
Eigen::MatrixXd rotation_transform(int n_modes, int mode, double phi);
Eigen::MatrixXd beamsplitter_transform(int n_modes, int mode_i, int mode_j, double transmissivity);

GaussianState vacuum(int n_modes);

/// Applies S to mean and covariance. S must be symplectic within 1e-10.
GaussianState apply_symplectic(const GaussianState& state, const Eigen::MatrixXd& s);

/// At angle 0 the x variance of a vacuum input shrinks by e^{-2r} and the p
/// variance grows by e^{2r}; `angle` rotates the squeezed axis.
GaussianState squeeze(const GaussianState& state, int mode, double r, double angle);

/// Phase-space rotation by phi.
GaussianState rotate(const GaussianState& state, int mode, double phi);

/// x_i' = sqrt(T) x_i + sqrt(1-T) x_j, x_j' = sqrt(1-T) x_i - sqrt(T) x_j,
/// likewise for p.
GaussianState beamsplitter(const GaussianState& state, int mode_i, int mode_j, double transmissivity);

/// Mixes `mode` with vacuum at transmissivity eta and discards the ancilla.
GaussianState loss_channel(const GaussianState& state, int mode, double eta);

/// Tensor product with `count` vacuum modes appended after the existing ones.
GaussianState append_vacuum(const GaussianState& state, int count);

/// Keeps the listed modes, in the given order.
GaussianState reduce(const GaussianState& state, const std::vector<int>& modes);

/// Mode 1 squeezed in p, modes 2 and 3 squeezed in x, all by r, then
/// beamsplitters (1,2) at T = 1/3 and (2,3) at T = 1/2.
GaussianState cv_ghz(double r);

/// Squeezers on both modes (x on 1, p on 2) followed by a 50:50 beamsplitter.
GaussianState two_mode_squeezed(double r);

/// cv_ghz(r) on modes 1..3, with modes 2 and 3 each tapped by a
/// beamsplitter of transmissivity eta against fresh vacua 4 and 5.
/// The eavesdropper holds modes {4, 5}.
GaussianState eavesdrop_scenario(double r, double eta);

/// Real linear combination of quadratures, one coefficient per quadrature.
class QuadratureCombo {
public:
  explicit QuadratureCombo(Eigen::VectorXd coefficients);

  static QuadratureCombo x(int n_modes, int mode);
  static QuadratureCombo p(int n_modes, int mode);
  /// cos(theta) x + sin(theta) p
  static QuadratureCombo quadrature(int n_modes, int mode, double theta);

  int n_modes() const { return static_cast<int>(coefficients_.size() / 2); }
  const Eigen::VectorXd& coefficients() const { return coefficients_; }
  std::vector<int> support() const;

  QuadratureCombo operator+(const QuadratureCombo& rhs) const;
  QuadratureCombo operator-(const QuadratureCombo& rhs) const;
  QuadratureCombo operator*(double k) const;

private:
  Eigen::VectorXd coefficients_;
};

/// One homodyne angle per measured mode: 0 measures x, pi/2 measures p.
struct HomodynePlan {
  std::vector<int> modes;
  std::vector<double> angles;

  static HomodynePlan all_x(std::vector<int> modes);
  static HomodynePlan all_p(std::vector<int> modes);

  void validate(int n_modes) const;
};

/// c^T V c. Throws on a zero combination.
double combo_variance(const GaussianState& state, const QuadratureCombo& combo);

/// min over real gains g of Var(T - sum_i g_i M_i), i.e. the Schur complement
/// V_T - V_TM V_MM^+ V_MT. Throws when the plan touches the target's modes.
double optimal_conditional_variance(const GaussianState& state, const QuadratureCombo& target,
                                    const HomodynePlan& plan);

/// The gains achieving optimal_conditional_variance.
Eigen::VectorXd optimal_gains(const GaussianState& state, const QuadratureCombo& target,
                              const HomodynePlan& plan);

/// Product of inference uncertainties for x and p of `target_mode`.
SteeringValue steering_product_cv(const GaussianState& state, int target_mode,
                                  const HomodynePlan& plan_x, const HomodynePlan& plan_p);

/// Delta(x_j - x_k) * Delta(p_j + p_k + p_m) with unit gains.
SteeringValue s_j_fixed_combo(const GaussianState& state, int j, int k, int m);

/// Same quadratures as s_j_fixed_combo (x_k, x_m for x_j; p_k, p_m for p_j)
/// with optimal gains. Reported alongside, never used for verdicts.
SteeringValue s_j_optimal_gain(const GaussianState& state, int j, int k, int m);

} // namespace steerkit::cv
