#include "sptmem/spin_core.hpp"

#include <bit>
#include <cmath>

#include <fmt/format.h>

#include "sptmem/errors.hpp"

namespace sptmem {

namespace {

constexpr cplx kPhases[4] = {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};

inline double parity_sign(std::uint64_t bits) {
  return (std::popcount(bits) & 1) ? -1.0 : 1.0;
}

void require_sites(int n_sites) {
  if (n_sites < 1 || n_sites > kMaxSites) {
    throw ContractViolation(fmt::format("n_sites {} outside [1, {}]", n_sites, kMaxSites));
  }
}

void require_same_size(int a, int b, const char* what) {
  if (a != b) {
    throw ContractViolation(fmt::format("{}: size mismatch ({} vs {} sites)", what, a, b));
  }
}

std::uint64_t full_mask(int n_sites) {
  return n_sites >= 64 ? ~0ULL : ((1ULL << n_sites) - 1ULL);
}

}  // namespace

std::uint64_t site_bit(int n_sites, int site) {
  if (site < 1 || site > n_sites) {
    throw ContractViolation(fmt::format("site {} outside 1..{}", site, n_sites));
  }
  return 1ULL << (n_sites - site);
}

// ---------------------------------------------------------------------------
// PauliString

PauliString::PauliString(int n_sites, std::uint64_t x_mask, std::uint64_t z_mask, int phase)
    : n_sites_(n_sites), x_mask_(x_mask), z_mask_(z_mask), phase_(((phase % 4) + 4) % 4) {
  require_sites(n_sites);
  if ((x_mask | z_mask) & ~full_mask(n_sites)) {
    throw ContractViolation("PauliString masks exceed n_sites bits");
  }
}

PauliString PauliString::identity(int n_sites) { return PauliString(n_sites, 0, 0, 0); }

PauliString PauliString::x(int n_sites, int site) {
  return PauliString(n_sites, site_bit(n_sites, site), 0, 0);
}

PauliString PauliString::y(int n_sites, int site) {
  const auto b = site_bit(n_sites, site);
  return PauliString(n_sites, b, b, 1);
}

PauliString PauliString::z(int n_sites, int site) {
  return PauliString(n_sites, 0, site_bit(n_sites, site), 0);
}

PauliString PauliString::parse(std::string_view word) {
  const int n = static_cast<int>(word.size());
  PauliString p = identity(n);
  for (int j = 1; j <= n; ++j) {
    switch (word[static_cast<std::size_t>(j - 1)]) {
      case 'I': break;
      case 'X': p = p * x(n, j); break;
      case 'Y': p = p * y(n, j); break;
      case 'Z': p = p * z(n, j); break;
      default:
        throw ContractViolation(fmt::format("invalid Pauli letter in '{}'", word));
    }
  }
  return p;
}

cplx PauliString::phase_factor() const { return kPhases[phase_]; }

bool PauliString::has_x(int site) const { return (x_mask_ & site_bit(n_sites_, site)) != 0; }
bool PauliString::has_z(int site) const { return (z_mask_ & site_bit(n_sites_, site)) != 0; }
int PauliString::weight() const { return std::popcount(x_mask_ | z_mask_); }
int PauliString::y_count() const { return std::popcount(x_mask_ & z_mask_); }
int PauliString::x_weight() const { return std::popcount(x_mask_); }

PauliString PauliString::operator*(const PauliString& rhs) const {
  require_same_size(n_sites_, rhs.n_sites_, "PauliString product");
  // X^a Z^b X^c Z^d = (-1)^{|b & c|} X^{a^c} Z^{b^d}
  const int swap = (std::popcount(z_mask_ & rhs.x_mask_) & 1) * 2;
  return PauliString(n_sites_, x_mask_ ^ rhs.x_mask_, z_mask_ ^ rhs.z_mask_,
                     phase_ + rhs.phase_ + swap);
}

bool PauliString::commutes_with(const PauliString& rhs) const {
  require_same_size(n_sites_, rhs.n_sites_, "PauliString commutator");
  const int k = std::popcount(z_mask_ & rhs.x_mask_) + std::popcount(x_mask_ & rhs.z_mask_);
  return (k & 1) == 0;
}

bool PauliString::is_hermitian() const { return ((phase_ - y_count()) & 1) == 0; }

int PauliString::hermitian_sign() const {
  if (!is_hermitian()) {
    throw ContractViolation(fmt::format("Pauli string {} is not Hermitian", to_string()));
  }
  return (((phase_ - y_count()) % 4 + 4) % 4) == 0 ? 1 : -1;
}

PauliString PauliString::unsigned_word() const {
  return PauliString(n_sites_, x_mask_, z_mask_, y_count());
}

std::string PauliString::to_string() const {
  static constexpr const char* kPrefix[4] = {"+", "+i", "-", "-i"};
  std::string out = kPrefix[((phase_ - y_count()) % 4 + 4) % 4];
  for (int j = 1; j <= n_sites_; ++j) {
    const bool xb = has_x(j), zb = has_z(j);
    out += xb ? (zb ? 'Y' : 'X') : (zb ? 'Z' : 'I');
  }
  return out;
}

// ---------------------------------------------------------------------------
// WeightedPauliSum

void WeightedPauliSum::add(double coefficient, const PauliString& p) {
  require_same_size(n_sites_, p.n_sites(), "WeightedPauliSum::add");
  const double c = coefficient * p.hermitian_sign();
  const PauliString word = p.unsigned_word();
  for (auto& t : terms_) {
    if (t.op == word) {
      t.coefficient += c;
      return;
    }
  }
  terms_.push_back({c, word});
}

WeightedPauliSum WeightedPauliSum::operator+(const WeightedPauliSum& rhs) const {
  require_same_size(n_sites_, rhs.n_sites_, "WeightedPauliSum sum");
  WeightedPauliSum out = *this;
  for (const auto& t : rhs.terms_) out.add(t.coefficient, t.op);
  return out;
}

WeightedPauliSum WeightedPauliSum::operator*(double s) const {
  WeightedPauliSum out = *this;
  for (auto& t : out.terms_) t.coefficient *= s;
  return out;
}

double WeightedPauliSum::coefficient_of(const PauliString& p) const {
  const PauliString word = p.unsigned_word();
  for (const auto& t : terms_) {
    if (t.op == word) return t.coefficient * p.hermitian_sign();
  }
  return 0.0;
}

double WeightedPauliSum::norm_bound() const {
  double s = 0.0;
  for (const auto& t : terms_) s += std::abs(t.coefficient);
  return s;
}

// ---------------------------------------------------------------------------
// StateVector

StateVector::StateVector(int n_sites) : n_sites_(n_sites) {
  require_sites(n_sites);
  amps_ = Amplitudes::Zero(Eigen::Index{1} << n_sites);
  amps_[0] = 1.0;
}

StateVector::StateVector(int n_sites, Amplitudes amplitudes)
    : n_sites_(n_sites), amps_(std::move(amplitudes)) {
  require_sites(n_sites);
  if (amps_.size() != (Eigen::Index{1} << n_sites)) {
    throw ContractViolation(fmt::format("amplitude vector of length {} for {} sites",
                                        amps_.size(), n_sites));
  }
}

StateVector StateVector::basis(int n_sites, std::uint64_t index) {
  StateVector v(n_sites);
  if (index >= v.dim()) throw ContractViolation("basis index out of range");
  v.amps_[0] = 0.0;
  v.amps_[static_cast<Eigen::Index>(index)] = 1.0;
  return v;
}

StateVector StateVector::product(const std::vector<std::array<cplx, 2>>& sites) {
  const int n = static_cast<int>(sites.size());
  require_sites(n);
  Amplitudes a = Amplitudes::Ones(1);
  for (const auto& s : sites) {
    Amplitudes next(a.size() * 2);
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      next[2 * i] = a[i] * s[0];
      next[2 * i + 1] = a[i] * s[1];
    }
    a = std::move(next);
  }
  return StateVector(n, std::move(a));
}

bool StateVector::is_normalized(double tol) const { return std::abs(norm() - 1.0) <= tol; }

// ---------------------------------------------------------------------------
// Operations

StateVector apply_pauli(const PauliString& p, const StateVector& v) {
  require_same_size(p.n_sites(), v.n_sites(), "apply_pauli");
  const auto& in = v.amplitudes();
  Amplitudes out(in.size());
  const cplx ph = p.phase_factor();
  const std::uint64_t xm = p.x_mask(), zm = p.z_mask();
  for (std::uint64_t k = 0; k < v.dim(); ++k) {
    out[static_cast<Eigen::Index>(k ^ xm)] = ph * parity_sign(k & zm) * in[static_cast<Eigen::Index>(k)];
  }
  return StateVector(v.n_sites(), std::move(out));
}

StateVector apply_sum(const WeightedPauliSum& h, const StateVector& v) {
  require_same_size(h.n_sites(), v.n_sites(), "apply_sum");
  Amplitudes out = Amplitudes::Zero(v.amplitudes().size());
  for (const auto& t : h.terms()) {
    out += t.coefficient * apply_pauli(t.op, v).amplitudes();
  }
  return StateVector(v.n_sites(), std::move(out));
}

cplx expectation_complex(const PauliString& p, const StateVector& v) {
  require_same_size(p.n_sites(), v.n_sites(), "expectation");
  const auto& a = v.amplitudes();
  const std::uint64_t xm = p.x_mask(), zm = p.z_mask();
  cplx acc = 0.0;
  for (std::uint64_t k = 0; k < v.dim(); ++k) {
    acc += std::conj(a[static_cast<Eigen::Index>(k ^ xm)]) * parity_sign(k & zm) *
           a[static_cast<Eigen::Index>(k)];
  }
  return p.phase_factor() * acc;
}

double expectation(const PauliString& p, const StateVector& v) {
  if (!p.is_hermitian()) {
    throw ContractViolation(fmt::format("expectation of non-Hermitian {}", p.to_string()));
  }
  return expectation_complex(p, v).real();
}

double expectation(const WeightedPauliSum& h, const StateVector& v) {
  double e = 0.0;
  for (const auto& t : h.terms()) e += t.coefficient * expectation(t.op, v);
  return e;
}

cplx inner(const StateVector& u, const StateVector& v) {
  require_same_size(u.n_sites(), v.n_sites(), "inner");
  return u.amplitudes().dot(v.amplitudes());
}

// ---------------------------------------------------------------------------
// SumOperator

SumOperator::SumOperator(const WeightedPauliSum& h)
    : n_sites_(h.n_sites()), norm_bound_(h.norm_bound()) {
  require_sites(n_sites_);
  const std::uint64_t dim = 1ULL << n_sites_;
  diagonal_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
  for (const auto& t : h.terms()) {
    if (t.op.x_mask() == 0) {
      // Unsigned Z-only words have phase 0.
      const std::uint64_t zm = t.op.z_mask();
      for (std::uint64_t k = 0; k < dim; ++k) {
        diagonal_[static_cast<Eigen::Index>(k)] += t.coefficient * parity_sign(k & zm);
      }
    } else {
      off_diagonal_.push_back({t.op.x_mask(), t.op.z_mask(), t.coefficient * t.op.phase_factor()});
    }
  }
}

void SumOperator::apply(const Amplitudes& in, Amplitudes& out) const {
  const Eigen::Index dim = in.size();
  out.resize(dim);
  const cplx* src = in.data();
  cplx* dst = out.data();
  const double* diag = diagonal_.data();
  for (Eigen::Index k = 0; k < dim; ++k) dst[k] = diag[k] * src[k];
  for (const auto& t : off_diagonal_) {
    // out[k] += c * (-1)^{|(k^x) & z|} in[k^x]
    const std::uint64_t xm = t.x_mask, zm = t.z_mask;
    if (t.coefficient.imag() == 0.0) {
      const double c = t.coefficient.real();
      for (std::uint64_t k = 0; k < static_cast<std::uint64_t>(dim); ++k) {
        const std::uint64_t src_k = k ^ xm;
        dst[k] += (c * parity_sign(src_k & zm)) * src[src_k];
      }
    } else {
      const cplx c = t.coefficient;
      for (std::uint64_t k = 0; k < static_cast<std::uint64_t>(dim); ++k) {
        const std::uint64_t src_k = k ^ xm;
        dst[k] += (c * parity_sign(src_k & zm)) * src[src_k];
      }
    }
  }
}

}  // namespace sptmem
