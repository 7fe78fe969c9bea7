#include <doctest.h>

#include <bit>
#include <cmath>

#include "generators.hpp"
#include "sptmem/errors.hpp"
#include "sptmem/oracles.hpp"
#include "sptmem/spin_core.hpp"

using namespace sptmem;

namespace {

const cplx I(0.0, 1.0);
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

StateVector plus_state(int n) {
  std::vector<std::array<cplx, 2>> sites(static_cast<std::size_t>(n), {kInvSqrt2, kInvSqrt2});
  return StateVector::product(sites);
}

}  // namespace

TEST_CASE("site 1 is the most significant basis bit") {
  CHECK(site_bit(3, 1) == 0b100);
  CHECK(site_bit(3, 3) == 0b001);
  CHECK(PauliString::parse("XZI").x_mask() == 0b100);
  CHECK(PauliString::parse("XZI").z_mask() == 0b010);
  CHECK_THROWS_AS(site_bit(3, 4), ContractViolation);
  CHECK_THROWS_AS(PauliString::parse("XQ"), ContractViolation);
}

TEST_CASE("single-site Pauli action") {
  const StateVector up(1);
  const StateVector down = StateVector::basis(1, 1);

  const auto x_up = apply_pauli(PauliString::x(1, 1), up);
  CHECK(x_up[0] == cplx(0.0));
  CHECK(x_up[1] == cplx(1.0));

  const auto z_down = apply_pauli(PauliString::z(1, 1), down);
  CHECK(z_down[1] == cplx(-1.0));

  const auto y_up = apply_pauli(PauliString::y(1, 1), up);
  CHECK(y_up[0] == cplx(0.0));
  CHECK(y_up[1] == I);
}

TEST_CASE("apply_sum examples") {
  WeightedPauliSum z(1);
  z.add(1.0, PauliString::z(1, 1));
  const auto a = apply_sum(z, StateVector(1));
  CHECK(a[0] == cplx(1.0));
  CHECK(a[1] == cplx(0.0));

  WeightedPauliSum xz(1);
  xz.add(1.0, PauliString::x(1, 1));
  xz.add(1.0, PauliString::z(1, 1));
  const auto b = apply_sum(xz, StateVector(1));
  CHECK(b[0] == cplx(1.0));
  CHECK(b[1] == cplx(1.0));

  // -X1 Z2 X3 on |+, up, +> has eigenvalue -1.
  WeightedPauliSum h0(3);
  h0.add(-1.0, PauliString::parse("XZX"));
  const auto v = StateVector::product({{kInvSqrt2, kInvSqrt2}, {1.0, 0.0}, {kInvSqrt2, kInvSqrt2}});
  const auto hv = apply_sum(h0, v);
  CHECK((hv.amplitudes() + v.amplitudes()).norm() < 1e-15);
  const Eigen::VectorXcd dense = -oracle::dense_word("XZX") * v.amplitudes();
  CHECK((hv.amplitudes() - dense).norm() < 1e-15);
}

TEST_CASE("expectation and inner product examples") {
  CHECK(expectation(PauliString::z(1, 1), StateVector(1)) == 1.0);
  CHECK(expectation(PauliString::x(1, 1), plus_state(1)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(expectation(PauliString::z(1, 1), plus_state(1))) < 1e-15);

  CHECK(inner(StateVector(1), StateVector(1)) == cplx(1.0));
  CHECK(inner(StateVector(1), StateVector::basis(1, 1)) == cplx(0.0));
  CHECK(std::abs(inner(plus_state(1), StateVector(1)) - kInvSqrt2) < 1e-15);

  CHECK_THROWS_AS(expectation(PauliString(1, 1, 0, 1), StateVector(1)), ContractViolation);
}

TEST_CASE("Pauli products follow the single-qubit table") {
  const auto x = PauliString::x(1, 1), y = PauliString::y(1, 1), z = PauliString::z(1, 1);
  const auto i_times = [](const PauliString& p, int k) {
    return PauliString(p.n_sites(), p.x_mask(), p.z_mask(), (p.phase() + k) % 4);
  };
  CHECK(x * y == i_times(z, 1));
  CHECK(y * z == i_times(x, 1));
  CHECK(z * x == i_times(y, 1));
  CHECK(y * x == i_times(z, 3));
  CHECK(x * x == PauliString::identity(1));
  CHECK(y * y == PauliString::identity(1));
  CHECK(!x.commutes_with(z));
  CHECK(x.commutes_with(x));
  CHECK(PauliString::parse("XX").commutes_with(PauliString::parse("ZZ")));
  CHECK(y.is_hermitian());
  CHECK(y.hermitian_sign() == 1);
  CHECK(!i_times(x, 1).is_hermitian());
  CHECK_THROWS_AS((void)i_times(x, 1).hermitian_sign(), ContractViolation);
  CHECK(PauliString::parse("YIZX").to_string() == "+YIZX");
  CHECK(i_times(PauliString::parse("XZ"), 2).to_string() == "-XZ");
}

TEST_CASE("WeightedPauliSum folds signs and merges words") {
  WeightedPauliSum h(2);
  h.add(0.5, PauliString::parse("ZZ"));
  h.add(0.25, PauliString(2, 0, 0b11, 2));  // -ZZ
  h.add(1.0, PauliString::parse("XI"));
  CHECK(h.size() == 2);
  CHECK(h.coefficient_of(PauliString::parse("ZZ")) == doctest::Approx(0.25));
  CHECK(h.coefficient_of(PauliString::parse("YY")) == 0.0);
  CHECK(h.norm_bound() == doctest::Approx(1.25));
  CHECK_THROWS_AS(h.add(1.0, PauliString(2, 0b10, 0, 1)), ContractViolation);
  CHECK((h * 2.0).coefficient_of(PauliString::parse("XI")) == doctest::Approx(2.0));
}

TEST_CASE("property: random strings match the dense Kronecker oracle") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = gen::integer(rng, 1, 6);
    const std::string w = gen::pauli_word(rng, n);
    const auto v = StateVector(n, oracle::random_state(Eigen::Index{1} << n, rng));
    const Eigen::VectorXcd ref = oracle::dense_word(w) * v.amplitudes();
    CHECK((apply_pauli(PauliString::parse(w), v).amplitudes() - ref).norm() < 1e-12);
    CHECK(std::abs(expectation(PauliString::parse(w), v) - v.amplitudes().dot(ref).real()) < 1e-12);
  }
}

TEST_CASE("property: apply_sum and SumOperator match the dense oracle") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = gen::integer(rng, 1, 6);
    const auto h = gen::pauli_sum(rng, n, gen::integer(rng, 1, 12));
    const auto v = StateVector(n, oracle::random_state(Eigen::Index{1} << n, rng));
    Eigen::MatrixXcd dense = Eigen::MatrixXcd::Zero(Eigen::Index{1} << n, Eigen::Index{1} << n);
    for (const auto& t : h.terms()) {
      dense += t.coefficient * oracle::dense_word(t.op.to_string().substr(1));
    }
    const Eigen::VectorXcd ref = dense * v.amplitudes();
    CHECK((apply_sum(h, v).amplitudes() - ref).norm() < 1e-12);
    Amplitudes out;
    SumOperator(h).apply(v.amplitudes(), out);
    CHECK((out - ref).norm() < 1e-12);
    CHECK(std::abs(expectation(h, v) - v.amplitudes().dot(ref).real()) < 1e-12);
  }
}

TEST_CASE("property: Pauli group laws") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = gen::integer(rng, 1, 8);
    const auto a = gen::pauli(rng, n), b = gen::pauli(rng, n), c = gen::pauli(rng, n);
    CHECK((a * b) * c == a * (b * c));
    // Hermitian words square to the identity.
    const auto h = a.unsigned_word();
    CHECK(h * h == PauliString::identity(n));
    CHECK(a.commutes_with(b) == b.commutes_with(a));
    // ab = +-ba with the sign given by commutation.
    const auto ab = a * b, ba = b * a;
    CHECK(ab.x_mask() == ba.x_mask());
    CHECK(ab.z_mask() == ba.z_mask());
    CHECK((ab.phase() - ba.phase() + 4) % 4 == (a.commutes_with(b) ? 0 : 2));
    CHECK(h.is_hermitian());
    CHECK(h.hermitian_sign() == 1);
    CHECK(h.weight() == static_cast<int>(std::popcount(h.x_mask() | h.z_mask())));
  }
}

TEST_CASE("property: Pauli action is an involution preserving the norm") {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = gen::integer(rng, 1, 10);
    const auto p = PauliString::parse(gen::pauli_word(rng, n));
    const auto v = StateVector(n, oracle::random_state(Eigen::Index{1} << n, rng));
    const auto pv = apply_pauli(p, v);
    CHECK(std::abs(pv.norm() - 1.0) < 1e-12);
    CHECK((apply_pauli(p, pv).amplitudes() - v.amplitudes()).norm() < 1e-12);
  }
}

TEST_CASE("state construction contracts") {
  CHECK(StateVector(3).dim() == 8);
  CHECK(StateVector(3).is_normalized());
  CHECK_THROWS(StateVector(3, Amplitudes::Zero(5)));
  CHECK_THROWS_AS(StateVector(0), ContractViolation);
  CHECK_THROWS_AS(apply_pauli(PauliString::x(2, 1), StateVector(3)), ContractViolation);
}
