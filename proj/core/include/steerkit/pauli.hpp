#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace steerkit::qubit {

enum class Pauli : std::uint8_t { I, X, Y, Z };

char to_char(Pauli p);
Pauli pauli_from_char(char c);

/// Signed tensor product of single-site Pauli operators.
///
/// Sites are numbered 1..n. In the computational basis site 1 is the most
/// significant bit of the amplitude index, and |up> is |0>.
class PauliString {
public:
  PauliString(std::vector<Pauli> factors, int sign = +1);

  /// Parses "XYI", "+XYI" or "-ZZI".
  static PauliString parse(std::string_view text);
  static PauliString identity(int n_qubits);
  static PauliString single(int n_qubits, int site, Pauli label);

  int n_qubits() const { return static_cast<int>(factors_.size()); }
  int sign() const { return sign_; }
  Pauli factor(int site) const;
  const std::vector<Pauli>& factors() const { return factors_; }

  /// Sites carrying a non-identity factor, ascending.
  std::vector<int> support() const;
  bool is_identity() const { return support().empty(); }
  bool overlaps(const PauliString& other) const;

  std::uint64_t x_mask() const;
  std::uint64_t z_mask() const;
  int y_count() const;

  PauliString negated() const { return PauliString(factors_, -sign_); }

  /// Product of two commuting strings. Throws when the operators anticommute
  /// (the product would carry an imaginary phase).
  PauliString operator*(const PauliString& rhs) const;

  /// Moves the factor at site s to site new_site[s-1].
  PauliString relabeled(std::span<const int> new_site) const;

  Eigen::VectorXcd apply(const Eigen::VectorXcd& psi) const;
  Eigen::MatrixXcd matrix() const;

  std::string to_string() const;

  friend bool operator==(const PauliString&, const PauliString&) = default;

private:
  std::vector<Pauli> factors_;
  int sign_;
};

} // namespace steerkit::qubit
