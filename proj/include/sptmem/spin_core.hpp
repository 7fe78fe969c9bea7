#pragma once

// Matrix-free Pauli algebra on N qubits.
//
// Conventions (shared by every file format in the project):
//   * Sites are labelled 1..N. In a basis index, site j is bit (N - j), so
//     site 1 is the most significant bit.
//   * Bit value 0 is |up> (Z = +1), bit value 1 is |down>.
//   * A PauliString stores i^phase * X^x_mask * Z^z_mask, masks in the same
//     bit space as basis indices. Y is represented as i*X*Z.

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace sptmem {

using cplx = std::complex<double>;
using Amplitudes = Eigen::VectorXcd;

inline constexpr int kMaxSites = 30;

/// Basis-index bit carrying site `site` (1-based) in an n-site chain.
std::uint64_t site_bit(int n_sites, int site);

class PauliString {
 public:
  PauliString() = default;
  PauliString(int n_sites, std::uint64_t x_mask, std::uint64_t z_mask,
              int phase = 0);

  static PauliString identity(int n_sites);
  static PauliString x(int n_sites, int site);
  static PauliString y(int n_sites, int site);
  static PauliString z(int n_sites, int site);
  /// Parses a word such as "XZXII" (site 1 first). Characters: I X Y Z.
  static PauliString parse(std::string_view word);

  int n_sites() const { return n_sites_; }
  std::uint64_t x_mask() const { return x_mask_; }
  std::uint64_t z_mask() const { return z_mask_; }
  /// Exponent k of the prefactor i^k, in 0..3.
  int phase() const { return phase_; }
  cplx phase_factor() const;

  bool has_x(int site) const;
  bool has_z(int site) const;
  int weight() const;
  int y_count() const;
  int x_weight() const;

  /// Operator product (*this) * rhs.
  PauliString operator*(const PauliString& rhs) const;
  bool commutes_with(const PauliString& rhs) const;

  bool is_hermitian() const;
  /// For a Hermitian string, the sign s such that the operator equals
  /// s * (tensor product of I/X/Y/Z). Throws ContractViolation otherwise.
  int hermitian_sign() const;
  /// Same Pauli word with the prefactor chosen so hermitian_sign() == +1.
  PauliString unsigned_word() const;

  /// "+XZX..": sign/phase followed by the word, site 1 first.
  std::string to_string() const;

  bool operator==(const PauliString&) const = default;

 private:
  int n_sites_ = 0;
  std::uint64_t x_mask_ = 0;
  std::uint64_t z_mask_ = 0;
  int phase_ = 0;
};

/// Hermitian operator sum_k c_k P_k with real c_k and Hermitian words.
class WeightedPauliSum {
 public:
  struct Term {
    double coefficient;
    PauliString op;  // hermitian_sign() == +1
  };

  explicit WeightedPauliSum(int n_sites = 0) : n_sites_(n_sites) {}

  /// Adds c * p. p must be Hermitian; its sign is folded into c and terms
  /// with the same Pauli word are merged.
  void add(double coefficient, const PauliString& p);
  WeightedPauliSum operator+(const WeightedPauliSum& rhs) const;
  WeightedPauliSum operator*(double s) const;

  int n_sites() const { return n_sites_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  /// Coefficient of the given word, 0 if absent (sign folded).
  double coefficient_of(const PauliString& p) const;
  /// Sum of |c_k|, an upper bound on the operator norm.
  double norm_bound() const;

 private:
  int n_sites_;
  std::vector<Term> terms_;
};

class StateVector {
 public:
  StateVector() = default;
  explicit StateVector(int n_sites);  // |up...up>
  StateVector(int n_sites, Amplitudes amplitudes);

  static StateVector basis(int n_sites, std::uint64_t index);
  /// Kronecker product of single-site states, site 1 first.
  static StateVector product(const std::vector<std::array<cplx, 2>>& sites);

  int n_sites() const { return n_sites_; }
  std::size_t dim() const { return static_cast<std::size_t>(amps_.size()); }
  const Amplitudes& amplitudes() const { return amps_; }
  Amplitudes& amplitudes() { return amps_; }
  cplx operator[](std::uint64_t i) const { return amps_[static_cast<Eigen::Index>(i)]; }

  double norm() const { return amps_.norm(); }
  bool is_normalized(double tol = 1e-10) const;

 private:
  int n_sites_ = 0;
  Amplitudes amps_;
};

/// P|v>, computed by index XOR and sign bits.
StateVector apply_pauli(const PauliString& p, const StateVector& v);
/// sum_k c_k P_k |v> (not normalized).
StateVector apply_sum(const WeightedPauliSum& h, const StateVector& v);

/// <v|P|v> with its imaginary residue; for Hermitian P the residue is
/// floating-point noise.
cplx expectation_complex(const PauliString& p, const StateVector& v);
/// Real part of <v|P|v>. Requires a Hermitian P.
double expectation(const PauliString& p, const StateVector& v);
/// <v|H|v> for a Hermitian sum.
double expectation(const WeightedPauliSum& h, const StateVector& v);

cplx inner(const StateVector& u, const StateVector& v);

/// Precompiled form of a WeightedPauliSum for repeated matrix-vector
/// products: all diagonal words are fused into one real vector.
class SumOperator {
 public:
  explicit SumOperator(const WeightedPauliSum& h);

  int n_sites() const { return n_sites_; }
  /// out = H * in. `out` must not alias `in`.
  void apply(const Amplitudes& in, Amplitudes& out) const;
  double norm_bound() const { return norm_bound_; }

 private:
  struct OffDiagonal {
    std::uint64_t x_mask;
    std::uint64_t z_mask;
    cplx coefficient;  // includes i^phase
  };

  int n_sites_;
  Eigen::VectorXd diagonal_;
  std::vector<OffDiagonal> off_diagonal_;
  double norm_bound_;
};

}  // namespace sptmem
