#include "steerkit/qubit.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

namespace steerkit::qubit {

namespace {

int qubits_for_dimension(Eigen::Index dim) {
  if (dim < 2) throw std::invalid_argument("state dimension must be at least 2");
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  if ((Eigen::Index{1} << n) != dim) throw std::invalid_argument("state dimension is not a power of two");
  if (n > kMaxQubits) throw std::invalid_argument("register exceeds " + std::to_string(kMaxQubits) + " qubits");
  return n;
}

} // namespace

PureState::PureState(Eigen::VectorXcd amplitudes)
    : n_qubits_(qubits_for_dimension(amplitudes.size())), amplitudes_(std::move(amplitudes)) {
  if (std::abs(amplitudes_.squaredNorm() - 1.0) > kNormTolerance)
    throw std::invalid_argument("state is not normalized");
}

DensityMatrix::DensityMatrix(Eigen::MatrixXcd entries)
    : n_qubits_(qubits_for_dimension(entries.rows())), entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) throw std::invalid_argument("density matrix must be square");
  const auto d = diagnose();
  if (d.hermiticity_error > kHermitianTolerance) throw std::invalid_argument("density matrix is not Hermitian");
  if (d.trace_error > kTraceTolerance) throw std::invalid_argument("density matrix trace is not 1");
  if (d.min_eigenvalue < kEigenvalueFloor) throw std::invalid_argument("density matrix is not positive semidefinite");
}

DensityMatrix::DensityMatrix(const PureState& psi)
    : n_qubits_(psi.n_qubits()), entries_(psi.amplitudes() * psi.amplitudes().adjoint()) {}

DensityMatrix::DensityMatrix(Eigen::MatrixXcd entries, Trusted)
    : n_qubits_(qubits_for_dimension(entries.rows())), entries_(std::move(entries)) {}

DensityMatrix DensityMatrix::maximally_mixed(int n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) throw std::invalid_argument("qubit count out of range");
  const auto dim = Eigen::Index{1} << n_qubits;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(dim, dim) / static_cast<double>(dim);
  return DensityMatrix(std::move(m), Trusted{});
}

DensityMatrix::Diagnostics DensityMatrix::diagnose() const {
  Diagnostics d{};
  d.hermiticity_error = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
  d.trace_error = std::abs(entries_.trace() - std::complex<double>(1.0, 0.0));
  Eigen::MatrixXcd herm = 0.5 * (entries_ + entries_.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm, Eigen::EigenvaluesOnly);
  d.min_eigenvalue = es.eigenvalues().minCoeff();
  return d;
}

void DetectionModel::validate() const {
  if (!(efficiency >= 0.0 && efficiency <= 1.0)) throw std::invalid_argument("detection efficiency must lie in [0,1]");
}

PureState ghz(int n) {
  if (n < 2) throw std::invalid_argument("ghz needs n >= 2");
  if (n > kMaxQubits) throw std::invalid_argument("ghz register too large");
  const auto dim = Eigen::Index{1} << n;
  Eigen::VectorXcd a = Eigen::VectorXcd::Zero(dim);
  const double h = 1.0 / std::numbers::sqrt2;
  a(0) = h;
  a(dim - 1) = -h;
  return PureState(std::move(a));
}

PureState basis_state(int n, std::uint64_t index) {
  if (n < 1 || n > kMaxQubits) throw std::invalid_argument("qubit count out of range");
  const auto dim = Eigen::Index{1} << n;
  if (index >= static_cast<std::uint64_t>(dim)) throw std::invalid_argument("basis index out of range");
  Eigen::VectorXcd a = Eigen::VectorXcd::Zero(dim);
  a(static_cast<Eigen::Index>(index)) = 1.0;
  return PureState(std::move(a));
}

Pauli to_pauli(SpinComponent c) {
  switch (c) {
  case SpinComponent::X: return Pauli::X;
  case SpinComponent::Y: return Pauli::Y;
  case SpinComponent::Z: return Pauli::Z;
  }
  return Pauli::I;
}

PauliString ghz_predictor(int n, SpinComponent component) {
  if (n < 2) throw std::invalid_argument("ghz_predictor needs n >= 2");
  std::vector<Pauli> f(static_cast<std::size_t>(n), Pauli::I);
  auto at = [&](int site) -> Pauli& { return f[static_cast<std::size_t>(site - 1)]; };

  if (component == SpinComponent::Z) {
    // <Z_j Z_k> = 1 on |0..0> - |1..1>.
    at(n - 1) = Pauli::Z;
    return PauliString(std::move(f), +1);
  }

  // An X/Y string with k Y factors (k even) has eigenvalue (-1)^(k/2 + 1)
  // on ghz(n). The predictor's sign makes target*predictor that string with
  // eigenvalue +1.
  const bool odd = n % 2 == 1;
  if (component == SpinComponent::X) {
    if (odd) {
      for (int s = 1; s <= n - 1; ++s) at(s) = Pauli::Y;
    } else {
      for (int s = 1; s <= n - 2; ++s) at(s) = Pauli::Y;
      at(n - 1) = Pauli::X;
    }
  } else {
    if (odd) {
      for (int s = 1; s <= n - 2; ++s) at(s) = Pauli::Y;
      at(n - 1) = Pauli::X;
    } else {
      for (int s = 1; s <= n - 1; ++s) at(s) = Pauli::Y;
    }
  }
  int k = 0;
  for (Pauli p : f) k += p == Pauli::Y;
  if (component == SpinComponent::Y) ++k;
  const int eigen = ((k / 2 + 1) % 2 == 0) ? +1 : -1;
  return PauliString(std::move(f), eigen);
}

PauliString ghz_predictor_for_target(int n, int target, SpinComponent component) {
  if (target < 1 || target > n) throw std::invalid_argument("target site out of range");
  std::vector<int> new_site(static_cast<std::size_t>(n));
  int next = 1;
  for (int s = 1; s <= n - 1; ++s) {
    if (next == target) ++next;
    new_site[static_cast<std::size_t>(s - 1)] = next++;
  }
  new_site[static_cast<std::size_t>(n - 1)] = target;
  return ghz_predictor(n, component).relabeled(new_site);
}

double expectation(const DensityMatrix& rho, const PauliString& obs) {
  if (obs.n_qubits() != rho.n_qubits()) throw std::invalid_argument("observable and state sizes differ");
  // Tr(rho P) = sum_b rho(b, b ^ x) * phase(b)
  const auto dim = static_cast<std::uint64_t>(rho.dim());
  const std::uint64_t xm = obs.x_mask(), zm = obs.z_mask();
  static const std::complex<double> ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const auto base = static_cast<double>(obs.sign()) * ipow[obs.y_count() % 4];
  const auto& m = rho.entries();
  std::complex<double> acc = 0.0;
  for (std::uint64_t b = 0; b < dim; ++b) {
    const double parity = (std::popcount(b & zm) & 1) ? -1.0 : 1.0;
    acc += parity * m(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(b ^ xm));
  }
  return (base * acc).real();
}

double expectation(const PureState& psi, const PauliString& obs) {
  if (obs.n_qubits() != psi.n_qubits()) throw std::invalid_argument("observable and state sizes differ");
  return psi.amplitudes().dot(obs.apply(psi.amplitudes())).real();
}

double variance_of_difference(const DensityMatrix& rho, const PauliString& target,
                              const PauliString& predictor) {
  if (target.n_qubits() != rho.n_qubits() || predictor.n_qubits() != rho.n_qubits())
    throw std::invalid_argument("observable and state sizes differ");
  if (target.overlaps(predictor)) throw std::invalid_argument("target and predictor supports overlap");
  // (T - P)^2 = 2 - 2TP for commuting involutions.
  const double t = expectation(rho, target);
  const double p = expectation(rho, predictor);
  const double tp = expectation(rho, target * predictor);
  const double mean = t - p;
  return std::max(0.0, 2.0 - 2.0 * tp - mean * mean);
}

DensityMatrix depolarize_global(const DensityMatrix& rho, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("depolarizing weight must lie in [0,1]");
  const auto dim = rho.dim();
  Eigen::MatrixXcd m = p * rho.entries();
  m.diagonal().array() += (1.0 - p) / static_cast<double>(dim);
  return DensityMatrix(std::move(m), DensityMatrix::Trusted{});
}

DensityMatrix apply_kraus(const DensityMatrix& rho, std::span<const Eigen::MatrixXcd> kraus) {
  if (kraus.empty()) throw std::invalid_argument("empty Kraus set");
  const auto dim = rho.dim();
  Eigen::MatrixXcd completeness = Eigen::MatrixXcd::Zero(dim, dim);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& k : kraus) {
    if (k.rows() != dim || k.cols() != dim) throw std::invalid_argument("Kraus operator dimension mismatch");
    completeness += k.adjoint() * k;
    out += k * rho.entries() * k.adjoint();
  }
  if ((completeness - Eigen::MatrixXcd::Identity(dim, dim)).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("Kraus operators are not trace preserving");
  return DensityMatrix(std::move(out), DensityMatrix::Trusted{});
}

Eigen::MatrixXcd partial_transpose(const DensityMatrix& rho, std::span<const int> sites) {
  const int n = rho.n_qubits();
  std::uint64_t mask = 0;
  for (int s : sites) {
    if (s < 1 || s > n) throw std::invalid_argument("site out of range");
    mask |= std::uint64_t{1} << (n - s);
  }
  const auto dim = rho.dim();
  Eigen::MatrixXcd out(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      const auto ur = static_cast<std::uint64_t>(r), uc = static_cast<std::uint64_t>(c);
      // swap the masked bits between row and column index
      const std::uint64_t nr = (ur & ~mask) | (uc & mask);
      const std::uint64_t nc = (uc & ~mask) | (ur & mask);
      out(static_cast<Eigen::Index>(nr), static_cast<Eigen::Index>(nc)) = rho.entries()(r, c);
    }
  }
  return out;
}

} // namespace steerkit::qubit
