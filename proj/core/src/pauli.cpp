#include "steerkit/pauli.hpp"

#include <bit>
#include <stdexcept>

namespace steerkit::qubit {

namespace {

using cd = std::complex<double>;

// Single-site product table: a*b = phase * result.
struct SiteProduct {
  Pauli result;
  cd phase;
};

SiteProduct multiply(Pauli a, Pauli b) {
  if (a == Pauli::I) return {b, 1.0};
  if (b == Pauli::I) return {a, 1.0};
  if (a == b) return {Pauli::I, 1.0};
  const cd i{0.0, 1.0};
  switch (a) {
  case Pauli::X: return b == Pauli::Y ? SiteProduct{Pauli::Z, i} : SiteProduct{Pauli::Y, -i};
  case Pauli::Y: return b == Pauli::Z ? SiteProduct{Pauli::X, i} : SiteProduct{Pauli::Z, -i};
  case Pauli::Z: return b == Pauli::X ? SiteProduct{Pauli::Y, i} : SiteProduct{Pauli::X, -i};
  case Pauli::I: break;
  }
  return {Pauli::I, 1.0};
}

} // namespace

char to_char(Pauli p) {
  switch (p) {
  case Pauli::I: return 'I';
  case Pauli::X: return 'X';
  case Pauli::Y: return 'Y';
  case Pauli::Z: return 'Z';
  }
  return '?';
}

Pauli pauli_from_char(char c) {
  switch (c) {
  case 'I': case 'i': return Pauli::I;
  case 'X': case 'x': return Pauli::X;
  case 'Y': case 'y': return Pauli::Y;
  case 'Z': case 'z': return Pauli::Z;
  default: throw std::invalid_argument(std::string("not a Pauli label: ") + c);
  }
}

PauliString::PauliString(std::vector<Pauli> factors, int sign)
    : factors_(std::move(factors)), sign_(sign) {
  if (factors_.empty()) throw std::invalid_argument("PauliString needs at least one site");
  if (factors_.size() > 62) throw std::invalid_argument("PauliString too long");
  if (sign_ != 1 && sign_ != -1) throw std::invalid_argument("PauliString sign must be +1 or -1");
}

PauliString PauliString::parse(std::string_view text) {
  int sign = +1;
  if (!text.empty() && (text.front() == '+' || text.front() == '-')) {
    sign = text.front() == '-' ? -1 : +1;
    text.remove_prefix(1);
  }
  std::vector<Pauli> factors;
  for (char c : text) factors.push_back(pauli_from_char(c));
  return PauliString(std::move(factors), sign);
}

PauliString PauliString::identity(int n_qubits) {
  if (n_qubits < 1) throw std::invalid_argument("identity needs n >= 1");
  return PauliString(std::vector<Pauli>(static_cast<std::size_t>(n_qubits), Pauli::I));
}

PauliString PauliString::single(int n_qubits, int site, Pauli label) {
  auto s = identity(n_qubits);
  if (site < 1 || site > n_qubits) throw std::invalid_argument("site out of range");
  s.factors_[static_cast<std::size_t>(site - 1)] = label;
  return s;
}

Pauli PauliString::factor(int site) const {
  if (site < 1 || site > n_qubits()) throw std::invalid_argument("site out of range");
  return factors_[static_cast<std::size_t>(site - 1)];
}

std::vector<int> PauliString::support() const {
  std::vector<int> sites;
  for (int s = 1; s <= n_qubits(); ++s)
    if (factors_[static_cast<std::size_t>(s - 1)] != Pauli::I) sites.push_back(s);
  return sites;
}

bool PauliString::overlaps(const PauliString& other) const {
  if (other.n_qubits() != n_qubits()) throw std::invalid_argument("PauliString size mismatch");
  for (std::size_t k = 0; k < factors_.size(); ++k)
    if (factors_[k] != Pauli::I && other.factors_[k] != Pauli::I) return true;
  return false;
}

std::uint64_t PauliString::x_mask() const {
  std::uint64_t m = 0;
  const int n = n_qubits();
  for (int s = 1; s <= n; ++s) {
    Pauli p = factors_[static_cast<std::size_t>(s - 1)];
    if (p == Pauli::X || p == Pauli::Y) m |= std::uint64_t{1} << (n - s);
  }
  return m;
}

std::uint64_t PauliString::z_mask() const {
  std::uint64_t m = 0;
  const int n = n_qubits();
  for (int s = 1; s <= n; ++s) {
    Pauli p = factors_[static_cast<std::size_t>(s - 1)];
    if (p == Pauli::Z || p == Pauli::Y) m |= std::uint64_t{1} << (n - s);
  }
  return m;
}

int PauliString::y_count() const {
  int k = 0;
  for (Pauli p : factors_) k += p == Pauli::Y;
  return k;
}

PauliString PauliString::operator*(const PauliString& rhs) const {
  if (rhs.n_qubits() != n_qubits()) throw std::invalid_argument("PauliString size mismatch");
  cd phase = static_cast<double>(sign_ * rhs.sign_);
  std::vector<Pauli> out(factors_.size());
  for (std::size_t k = 0; k < factors_.size(); ++k) {
    auto [p, ph] = multiply(factors_[k], rhs.factors_[k]);
    out[k] = p;
    phase *= ph;
  }
  if (std::abs(phase.imag()) > 0.5)
    throw std::invalid_argument("product of anticommuting Pauli strings is not Hermitian");
  return PauliString(std::move(out), phase.real() > 0 ? +1 : -1);
}

PauliString PauliString::relabeled(std::span<const int> new_site) const {
  const int n = n_qubits();
  if (static_cast<int>(new_site.size()) != n) throw std::invalid_argument("relabeling size mismatch");
  std::vector<Pauli> out(factors_.size(), Pauli::I);
  std::vector<bool> used(factors_.size(), false);
  for (int s = 1; s <= n; ++s) {
    int t = new_site[static_cast<std::size_t>(s - 1)];
    if (t < 1 || t > n || used[static_cast<std::size_t>(t - 1)])
      throw std::invalid_argument("relabeling is not a permutation");
    used[static_cast<std::size_t>(t - 1)] = true;
    out[static_cast<std::size_t>(t - 1)] = factors_[static_cast<std::size_t>(s - 1)];
  }
  return PauliString(std::move(out), sign_);
}

Eigen::VectorXcd PauliString::apply(const Eigen::VectorXcd& psi) const {
  const auto dim = std::uint64_t{1} << n_qubits();
  if (static_cast<std::uint64_t>(psi.size()) != dim) throw std::invalid_argument("state dimension mismatch");
  const std::uint64_t xm = x_mask(), zm = z_mask();
  // P|b> = sign * i^{#Y} * (-1)^{popcount(b & zmask)} |b ^ xmask>
  static const cd ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const cd base = static_cast<double>(sign_) * ipow[y_count() % 4];
  Eigen::VectorXcd out(psi.size());
  for (std::uint64_t b = 0; b < dim; ++b) {
    const double parity = (std::popcount(b & zm) & 1) ? -1.0 : 1.0;
    out(static_cast<Eigen::Index>(b ^ xm)) = base * parity * psi(static_cast<Eigen::Index>(b));
  }
  return out;
}

Eigen::MatrixXcd PauliString::matrix() const {
  const auto dim = Eigen::Index{1} << n_qubits();
  Eigen::MatrixXcd m(dim, dim);
  for (Eigen::Index c = 0; c < dim; ++c) {
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(dim);
    e(c) = 1.0;
    m.col(c) = apply(e);
  }
  return m;
}

std::string PauliString::to_string() const {
  std::string s(1, sign_ > 0 ? '+' : '-');
  for (Pauli p : factors_) s.push_back(to_char(p));
  return s;
}

} // namespace steerkit::qubit
