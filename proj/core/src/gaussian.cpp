#include "steerkit/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace steerkit::cv {

namespace {

void check_mode(int n_modes, int mode) {
  if (mode < 1 || mode > n_modes) throw std::invalid_argument("mode out of range");
}

Eigen::Index xi(int mode) { return 2 * (mode - 1); }
Eigen::Index pi(int mode) { return 2 * (mode - 1) + 1; }

} // namespace

GaussianState::GaussianState(Eigen::VectorXd mean, Eigen::MatrixXd cov)
    : mean_(std::move(mean)), cov_(std::move(cov)) {
  if (mean_.size() == 0 || mean_.size() % 2 != 0) throw std::invalid_argument("mean must have 2n entries");
  if (cov_.rows() != mean_.size() || cov_.cols() != mean_.size())
    throw std::invalid_argument("covariance must be 2n x 2n");
  if ((cov_ - cov_.transpose()).cwiseAbs().maxCoeff() > kSymmetryTolerance)
    throw std::invalid_argument("covariance is not symmetric");
  cov_ = 0.5 * (cov_ + cov_.transpose()).eval();
  const Eigen::VectorXd nu = symplectic_eigenvalues(cov_);
  if (nu.minCoeff() < kPhysicalityFloor) throw std::invalid_argument("covariance violates the uncertainty principle");
}

GaussianState::GaussianState(Eigen::VectorXd mean, Eigen::MatrixXd cov, Trusted)
    : mean_(std::move(mean)), cov_(std::move(cov)) {
  cov_ = 0.5 * (cov_ + cov_.transpose()).eval();
}

double GaussianState::var_x(int mode) const {
  check_mode(n_modes(), mode);
  return cov_(xi(mode), xi(mode));
}

double GaussianState::var_p(int mode) const {
  check_mode(n_modes(), mode);
  return cov_(pi(mode), pi(mode));
}

Eigen::MatrixXd symplectic_form(int n_modes) {
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * n_modes, 2 * n_modes);
  for (int k = 0; k < n_modes; ++k) {
    omega(2 * k, 2 * k + 1) = 1.0;
    omega(2 * k + 1, 2 * k) = -1.0;
  }
  return omega;
}

Eigen::VectorXd symplectic_eigenvalues(const Eigen::MatrixXd& cov) {
  const auto dim = cov.rows();
  if (dim == 0 || dim % 2 != 0 || cov.cols() != dim) throw std::invalid_argument("covariance must be 2n x 2n");
  const int n = static_cast<int>(dim / 2);
  const Eigen::MatrixXd omega = symplectic_form(n);
  Eigen::VectorXd all(dim);

  // For V > 0 the Hermitian matrix i L^T Omega L (V = L L^T) has eigenvalues
  // +-nu_k. Otherwise fall back to |eig(Omega V)|.
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() == Eigen::Success) {
    const Eigen::MatrixXd l = llt.matrixL();
    const Eigen::MatrixXd a = l.transpose() * omega * l;
    const Eigen::MatrixXcd h = std::complex<double>(0.0, 1.0) * a.cast<std::complex<double>>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    all = es.eigenvalues().cwiseAbs();
  } else {
    Eigen::EigenSolver<Eigen::MatrixXd> es(omega * cov, false);
    all = es.eigenvalues().cwiseAbs();
  }
  std::sort(all.data(), all.data() + all.size());
  Eigen::VectorXd nu(n);
  for (int k = 0; k < n; ++k) nu(k) = 0.5 * (all(2 * k) + all(2 * k + 1));
  // A non-positive covariance has an eigenvalue that must dominate the verdict.
  if (llt.info() != Eigen::Success) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> sym(cov, Eigen::EigenvaluesOnly);
    if (sym.eigenvalues().minCoeff() <= 0.0) nu(0) = std::min(nu(0), sym.eigenvalues().minCoeff());
  }
  return nu;
}

double symplectic_defect(const Eigen::MatrixXd& s) {
  if (s.rows() != s.cols() || s.rows() % 2 != 0) throw std::invalid_argument("transform must be 2n x 2n");
  const Eigen::MatrixXd omega = symplectic_form(static_cast<int>(s.rows() / 2));
  return (s * omega * s.transpose() - omega).cwiseAbs().maxCoeff();
}

Eigen::MatrixXd squeeze_transform(int n_modes, int mode, double r, double angle) {
  check_mode(n_modes, mode);
  if (!(r >= 0.0)) throw std::invalid_argument("squeezing parameter must be non-negative");
  const double c = std::cos(angle), s = std::sin(angle);
  Eigen::Matrix2d rot;
  rot << c, -s, s, c;
  const Eigen::Matrix2d local = rot * Eigen::Vector2d(std::exp(-r), std::exp(r)).asDiagonal() * rot.transpose();
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes);
  out.block<2, 2>(xi(mode), xi(mode)) = local;
  return out;
}

Eigen::MatrixXd rotation_transform(int n_modes, int mode, double phi) {
  check_mode(n_modes, mode);
  const double c = std::cos(phi), s = std::sin(phi);
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes);
  out.block<2, 2>(xi(mode), xi(mode)) << c, s, -s, c;
  return out;
}

Eigen::MatrixXd beamsplitter_transform(int n_modes, int mode_i, int mode_j, double transmissivity) {
  check_mode(n_modes, mode_i);
  check_mode(n_modes, mode_j);
  if (mode_i == mode_j) throw std::invalid_argument("beamsplitter needs two distinct modes");
  if (!(transmissivity >= 0.0 && transmissivity <= 1.0))
    throw std::invalid_argument("transmissivity must lie in [0,1]");
  const double t = std::sqrt(transmissivity), u = std::sqrt(1.0 - transmissivity);
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes);
  for (Eigen::Index q = 0; q < 2; ++q) {
    const Eigen::Index a = xi(mode_i) + q, b = xi(mode_j) + q;
    out(a, a) = t;
    out(a, b) = u;
    out(b, a) = u;
    out(b, b) = -t;
  }
  return out;
}

GaussianState vacuum(int n_modes) {
  if (n_modes < 1) throw std::invalid_argument("vacuum needs at least one mode");
  return GaussianState(Eigen::VectorXd::Zero(2 * n_modes), Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes));
}

GaussianState apply_symplectic(const GaussianState& state, const Eigen::MatrixXd& s) {
  if (s.rows() != state.cov().rows() || s.cols() != state.cov().cols())
    throw std::invalid_argument("transform dimension mismatch");
  if (symplectic_defect(s) > kSymplecticTolerance) throw std::invalid_argument("transform is not symplectic");
  return GaussianState(s * state.mean(), s * state.cov() * s.transpose(), GaussianState::Trusted{});
}

GaussianState squeeze(const GaussianState& state, int mode, double r, double angle) {
  return apply_symplectic(state, squeeze_transform(state.n_modes(), mode, r, angle));
}

GaussianState rotate(const GaussianState& state, int mode, double phi) {
  return apply_symplectic(state, rotation_transform(state.n_modes(), mode, phi));
}

GaussianState beamsplitter(const GaussianState& state, int mode_i, int mode_j, double transmissivity) {
  return apply_symplectic(state, beamsplitter_transform(state.n_modes(), mode_i, mode_j, transmissivity));
}

GaussianState loss_channel(const GaussianState& state, int mode, double eta) {
  check_mode(state.n_modes(), mode);
  if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("loss efficiency must lie in [0,1]");
  const double g = std::sqrt(eta);
  const Eigen::Index dim = state.cov().rows();
  Eigen::VectorXd scale = Eigen::VectorXd::Ones(dim);
  scale(xi(mode)) = g;
  scale(pi(mode)) = g;
  Eigen::MatrixXd cov = scale.asDiagonal() * state.cov() * scale.asDiagonal();
  cov(xi(mode), xi(mode)) += 1.0 - eta;
  cov(pi(mode), pi(mode)) += 1.0 - eta;
  Eigen::VectorXd mean = scale.asDiagonal() * state.mean();
  return GaussianState(std::move(mean), std::move(cov), GaussianState::Trusted{});
}

GaussianState append_vacuum(const GaussianState& state, int count) {
  if (count < 0) throw std::invalid_argument("negative mode count");
  const Eigen::Index old_dim = state.cov().rows();
  const Eigen::Index dim = old_dim + 2 * count;
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(dim);
  mean.head(old_dim) = state.mean();
  Eigen::MatrixXd cov = Eigen::MatrixXd::Identity(dim, dim);
  cov.topLeftCorner(old_dim, old_dim) = state.cov();
  return GaussianState(std::move(mean), std::move(cov), GaussianState::Trusted{});
}

GaussianState reduce(const GaussianState& state, const std::vector<int>& modes) {
  if (modes.empty()) throw std::invalid_argument("reduce needs at least one mode");
  const auto k = static_cast<Eigen::Index>(modes.size());
  Eigen::VectorXd mean(2 * k);
  Eigen::MatrixXd cov(2 * k, 2 * k);
  for (Eigen::Index a = 0; a < k; ++a) {
    check_mode(state.n_modes(), modes[static_cast<std::size_t>(a)]);
    for (Eigen::Index b = 0; b < k; ++b) {
      const Eigen::Index ra = xi(modes[static_cast<std::size_t>(a)]);
      const Eigen::Index rb = xi(modes[static_cast<std::size_t>(b)]);
      cov.block<2, 2>(2 * a, 2 * b) = state.cov().block<2, 2>(ra, rb);
    }
    mean.segment<2>(2 * a) = state.mean().segment<2>(xi(modes[static_cast<std::size_t>(a)]));
  }
  return GaussianState(std::move(mean), std::move(cov), GaussianState::Trusted{});
}

GaussianState cv_ghz(double r) {
  if (!(r >= 0.0)) throw std::invalid_argument("squeezing parameter must be non-negative");
  constexpr double half_pi = std::numbers::pi / 2.0;
  GaussianState s = vacuum(3);
  s = squeeze(s, 1, r, half_pi);
  s = squeeze(s, 2, r, 0.0);
  s = squeeze(s, 3, r, 0.0);
  s = beamsplitter(s, 1, 2, 1.0 / 3.0);
  s = beamsplitter(s, 2, 3, 0.5);
  return s;
}

GaussianState two_mode_squeezed(double r) {
  if (!(r >= 0.0)) throw std::invalid_argument("squeezing parameter must be non-negative");
  GaussianState s = vacuum(2);
  s = squeeze(s, 1, r, 0.0);
  s = squeeze(s, 2, r, std::numbers::pi / 2.0);
  return beamsplitter(s, 1, 2, 0.5);
}

GaussianState eavesdrop_scenario(double r, double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("tap transmissivity must lie in [0,1]");
  GaussianState s = append_vacuum(cv_ghz(r), 2);
  s = beamsplitter(s, 2, 4, eta);
  s = beamsplitter(s, 3, 5, eta);
  return s;
}

} // namespace steerkit::cv
