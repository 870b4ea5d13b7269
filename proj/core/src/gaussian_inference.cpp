#include "steerkit/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace steerkit::cv {

namespace {

struct Blocks {
  double target_var;
  Eigen::RowVectorXd cross;  // Cov(T, M_i)
  Eigen::MatrixXd measured;  // Cov(M_i, M_j)
};

Eigen::MatrixXd measured_quadratures(const GaussianState& state, const QuadratureCombo& target,
                                     const HomodynePlan& plan) {
  if (target.n_modes() != state.n_modes()) throw std::invalid_argument("combination and state sizes differ");
  plan.validate(state.n_modes());
  for (int m : target.support())
    if (std::find(plan.modes.begin(), plan.modes.end(), m) != plan.modes.end())
      throw std::invalid_argument("homodyne plan measures a mode of the inference target");

  const auto k = static_cast<Eigen::Index>(plan.modes.size());
  Eigen::MatrixXd quad = Eigen::MatrixXd::Zero(state.cov().rows(), k);
  for (Eigen::Index i = 0; i < k; ++i)
    quad.col(i) = QuadratureCombo::quadrature(state.n_modes(), plan.modes[static_cast<std::size_t>(i)],
                                              plan.angles[static_cast<std::size_t>(i)])
                      .coefficients();
  return quad;
}

Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& sym) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  Eigen::VectorXd inv = es.eigenvalues();
  for (Eigen::Index i = 0; i < inv.size(); ++i) inv(i) = inv(i) > kPseudoInverseCutoff ? 1.0 / inv(i) : 0.0;
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

struct Inference {
  Eigen::VectorXd gains;
  double variance;
};

// min_g (c - Q g)^T V (c - Q g). With V = L L^T this is the least-squares
// problem min_g |L^T c - L^T Q g|^2, solved by SVD so that no e^{2r}-sized
// terms cancel. Singular values with sigma^2 <= kPseudoInverseCutoff are
// dropped, which matches the pseudo-inverse of the measured block Q^T V Q.
Inference infer(const GaussianState& state, const QuadratureCombo& target, const HomodynePlan& plan) {
  const Eigen::MatrixXd quad = measured_quadratures(state, target, plan);
  const Eigen::VectorXd& c = target.coefficients();
  if (quad.cols() == 0) return {Eigen::VectorXd(0), c.dot(state.cov() * c)};

  const Eigen::LLT<Eigen::MatrixXd> llt(state.cov());
  if (llt.info() != Eigen::Success) {
    const Blocks b{c.dot(state.cov() * c), c.transpose() * state.cov() * quad, quad.transpose() * state.cov() * quad};
    Eigen::VectorXd gains = pseudo_inverse(b.measured) * b.cross.transpose();
    return {gains, std::max(0.0, b.target_var - (b.cross * gains)(0))};
  }
  const Eigen::MatrixXd lt = llt.matrixL().transpose();
  const Eigen::VectorXd a = lt * c;
  const Eigen::MatrixXd m = lt * quad;
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd sigma = svd.singularValues();
  Eigen::VectorXd coeff = svd.matrixU().transpose() * a;
  for (Eigen::Index i = 0; i < sigma.size(); ++i)
    coeff(i) = sigma(i) * sigma(i) > kPseudoInverseCutoff ? coeff(i) / sigma(i) : 0.0;
  Eigen::VectorXd gains = svd.matrixV() * coeff;
  const Eigen::VectorXd residual = a - m * gains;
  return {std::move(gains), residual.squaredNorm()};
}

std::vector<int> sorted_union(const std::vector<int>& a, const std::vector<int>& b) {
  std::set<int> s(a.begin(), a.end());
  s.insert(b.begin(), b.end());
  return {s.begin(), s.end()};
}

} // namespace

QuadratureCombo::QuadratureCombo(Eigen::VectorXd coefficients) : coefficients_(std::move(coefficients)) {
  if (coefficients_.size() == 0 || coefficients_.size() % 2 != 0)
    throw std::invalid_argument("combination needs 2n coefficients");
  if (coefficients_.isZero(0.0)) throw std::invalid_argument("combination is identically zero");
}

QuadratureCombo QuadratureCombo::x(int n_modes, int mode) { return quadrature(n_modes, mode, 0.0); }

QuadratureCombo QuadratureCombo::p(int n_modes, int mode) {
  if (mode < 1 || mode > n_modes) throw std::invalid_argument("mode out of range");
  Eigen::VectorXd c = Eigen::VectorXd::Zero(2 * n_modes);
  c(2 * (mode - 1) + 1) = 1.0;
  return QuadratureCombo(std::move(c));
}

QuadratureCombo QuadratureCombo::quadrature(int n_modes, int mode, double theta) {
  if (mode < 1 || mode > n_modes) throw std::invalid_argument("mode out of range");
  Eigen::VectorXd c = Eigen::VectorXd::Zero(2 * n_modes);
  c(2 * (mode - 1)) = std::cos(theta);
  c(2 * (mode - 1) + 1) = std::sin(theta);
  return QuadratureCombo(std::move(c));
}

std::vector<int> QuadratureCombo::support() const {
  std::vector<int> modes;
  for (int m = 1; m <= n_modes(); ++m)
    if (coefficients_(2 * (m - 1)) != 0.0 || coefficients_(2 * (m - 1) + 1) != 0.0) modes.push_back(m);
  return modes;
}

QuadratureCombo QuadratureCombo::operator+(const QuadratureCombo& rhs) const {
  if (rhs.coefficients_.size() != coefficients_.size()) throw std::invalid_argument("combination size mismatch");
  return QuadratureCombo(coefficients_ + rhs.coefficients_);
}

QuadratureCombo QuadratureCombo::operator-(const QuadratureCombo& rhs) const {
  if (rhs.coefficients_.size() != coefficients_.size()) throw std::invalid_argument("combination size mismatch");
  return QuadratureCombo(coefficients_ - rhs.coefficients_);
}

QuadratureCombo QuadratureCombo::operator*(double k) const { return QuadratureCombo(coefficients_ * k); }

HomodynePlan HomodynePlan::all_x(std::vector<int> modes) {
  std::vector<double> angles(modes.size(), 0.0);
  return HomodynePlan{std::move(modes), std::move(angles)};
}

HomodynePlan HomodynePlan::all_p(std::vector<int> modes) {
  std::vector<double> angles(modes.size(), std::numbers::pi / 2.0);
  return HomodynePlan{std::move(modes), std::move(angles)};
}

void HomodynePlan::validate(int n_modes) const {
  if (modes.size() != angles.size()) throw std::invalid_argument("one homodyne angle per measured mode required");
  std::set<int> seen;
  for (int m : modes) {
    if (m < 1 || m > n_modes) throw std::invalid_argument("measured mode out of range");
    if (!seen.insert(m).second) throw std::invalid_argument("mode measured twice");
  }
  for (double a : angles)
    if (!std::isfinite(a)) throw std::invalid_argument("homodyne angle must be finite");
}

double combo_variance(const GaussianState& state, const QuadratureCombo& combo) {
  if (combo.n_modes() != state.n_modes()) throw std::invalid_argument("combination and state sizes differ");
  if (combo.coefficients().isZero(0.0)) throw std::invalid_argument("zero quadrature combination");
  const Eigen::VectorXd& c = combo.coefficients();
  return std::max(0.0, c.dot(state.cov() * c));
}

double optimal_conditional_variance(const GaussianState& state, const QuadratureCombo& target,
                                    const HomodynePlan& plan) {
  return infer(state, target, plan).variance;
}

Eigen::VectorXd optimal_gains(const GaussianState& state, const QuadratureCombo& target, const HomodynePlan& plan) {
  return infer(state, target, plan).gains;
}

SteeringValue steering_product_cv(const GaussianState& state, int target_mode, const HomodynePlan& plan_x,
                                  const HomodynePlan& plan_p) {
  const int n = state.n_modes();
  Partition partition{sorted_union(plan_x.modes, plan_p.modes), target_mode};
  partition.validate(n);
  const double vx = optimal_conditional_variance(state, QuadratureCombo::x(n, target_mode), plan_x);
  const double vp = optimal_conditional_variance(state, QuadratureCombo::p(n, target_mode), plan_p);
  return SteeringValue::make(CriterionId::CvProduct, std::move(partition), std::sqrt(vx) * std::sqrt(vp),
                             "optimal-gain");
}

SteeringValue s_j_fixed_combo(const GaussianState& state, int j, int k, int m) {
  const int n = state.n_modes();
  Partition partition{{k, m}, j};
  partition.validate(n);
  using Q = QuadratureCombo;
  const double vx = combo_variance(state, Q::x(n, j) - Q::x(n, k));
  const double vp = combo_variance(state, Q::p(n, j) + Q::p(n, k) + Q::p(n, m));
  return SteeringValue::make(CriterionId::CvFixedCombo, std::move(partition), std::sqrt(vx) * std::sqrt(vp),
                             "unit-gain");
}

SteeringValue s_j_optimal_gain(const GaussianState& state, int j, int k, int m) {
  const int n = state.n_modes();
  Partition partition{{k, m}, j};
  partition.validate(n);
  const double vx = optimal_conditional_variance(state, QuadratureCombo::x(n, j), HomodynePlan::all_x({k, m}));
  const double vp = optimal_conditional_variance(state, QuadratureCombo::p(n, j), HomodynePlan::all_p({k, m}));
  return SteeringValue::make(CriterionId::CvFixedCombo, std::move(partition), std::sqrt(vx) * std::sqrt(vp),
                             "optimal-gain");
}

} // namespace steerkit::cv
