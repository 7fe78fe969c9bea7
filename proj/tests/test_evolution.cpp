#include <doctest.h>

#include <cmath>
#include <sstream>

#include "generators.hpp"
#include "sptmem/errors.hpp"
#include "sptmem/evolution.hpp"
#include "sptmem/model.hpp"
#include "sptmem/oracles.hpp"

using namespace sptmem;

namespace {

WeightedPauliSum chain(int n, double J, double delta, std::uint64_t seed, int index = 0) {
  const ModelParams p{n, J, delta, seed};
  return build_hamiltonian(p, sample_disorder(p, index));
}

StateVector random_chain_state(int n, std::mt19937_64& rng) {
  return StateVector(n, oracle::random_state(Eigen::Index{1} << n, rng));
}

StateVector run_to(const WeightedPauliSum& h, StateVector v, const IntegratorConfig& cfg, double t) {
  Propagator prop(h, cfg);
  const long steps = std::lround(t / cfg.dt);
  for (long s = 0; s < steps; ++s) prop.step(v.amplitudes(), static_cast<double>(s) * cfg.dt);
  return v;
}

}  // namespace

TEST_CASE("zero Hamiltonian is the identity") {
  std::mt19937_64 rng(31);
  const auto v = random_chain_state(4, rng);
  const auto out = step(WeightedPauliSum(4), v, IntegratorConfig{});
  CHECK(out.amplitudes() == v.amplitudes());
}

namespace {

double rabi_error(IntegratorConfig cfg) {
  WeightedPauliSum h(1);
  h.add(1.0, PauliString::x(1, 1));
  const auto ts = evolve_and_sample(h, StateVector(1), cfg, SamplingSchedule{20.0, 1},
                                    {PauliString::z(1, 1)}, {"Z"});
  REQUIRE(ts.size() == 201);
  double worst = 0.0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    worst = std::max(worst, std::abs(ts.values[k][0] - std::cos(2.0 * ts.times[k])));
  }
  return worst;
}

}  // namespace

TEST_CASE("two-level Rabi oscillation") {
  CHECK(rabi_error(IntegratorConfig{}) <= 1e-8);

  IntegratorConfig rk;
  rk.method = IntegrationMethod::rk4;
  // Global RK4 error grows as t h^4; the reference method needs finer substeps for 1e-8 at t = 20.
  rk.rk4_substep_scale = 0.005;
  CHECK(rabi_error(rk) <= 1e-8);
}

TEST_CASE("Krylov propagation matches dense eigendecomposition at N = 6") {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 5; ++trial) {
    const double J = gen::real(rng, 0.0, 0.3), delta = gen::real(rng, 0.0, 3.5);
    const ModelParams p{6, J, delta, rng()};
    const auto dis = sample_disorder(p, 0);
    const auto v0 = random_chain_state(6, rng);
    const auto v = run_to(build_hamiltonian(p, dis), v0, IntegratorConfig{}, 10.0);
    const Eigen::VectorXcd ref =
        oracle::dense_propagate(oracle::dense_hamiltonian(6, J, dis.h), v0.amplitudes(), 10.0);
    CHECK(std::norm(ref.dot(v.amplitudes())) >= 1.0 - 1e-8);
  }
}

TEST_CASE("Krylov and RK4 agree") {
  std::mt19937_64 rng(33);
  for (int n : {5, 7, 8}) {
    const auto h = chain(n, 0.1, 1.0, rng());
    const auto v0 = random_chain_state(n, rng);
    IntegratorConfig rk;
    rk.method = IntegrationMethod::rk4;
    rk.norm_drift_limit = 1e-8;  // RK4 is not exactly unitary
    const auto a = run_to(h, v0, IntegratorConfig{}, 10.0);
    const auto b = run_to(h, v0, rk, 10.0);
    CHECK((a.amplitudes() - b.amplitudes()).norm() <= 1e-6);
  }
}

TEST_CASE("evolving back under -H returns the initial state") {
  std::mt19937_64 rng(34);
  const auto h = chain(8, 0.1, 2.0, 9);
  const auto v0 = random_chain_state(8, rng);
  const auto forward = run_to(h, v0, IntegratorConfig{}, 20.0);
  const auto back = run_to(h * -1.0, forward, IntegratorConfig{}, 20.0);
  CHECK((back.amplitudes() - v0.amplitudes()).norm() <= 1e-7);
}

TEST_CASE("energy is conserved") {
  const auto h = chain(8, 0.1, 1.0, 35);
  const auto v0 = prepare_state(LogicalPrep::product(qubits::plus(), qubits::plus_i()), 8);
  const auto ts = evolve_and_sample(h, v0, IntegratorConfig{}, SamplingSchedule{100.0, 10}, {});
  const double e0 = ts.energy.front();
  REQUIRE(std::abs(e0) > 0.1);
  double worst = 0.0, worst_norm = 0.0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    worst = std::max(worst, std::abs(ts.energy[k] - e0) / std::abs(e0));
    worst_norm = std::max(worst_norm, std::abs(ts.norm[k] - 1.0));
  }
  CHECK(worst <= 1e-8);
  CHECK(worst_norm <= 1e-9);
}

TEST_CASE("edge observables are constant without the Ising perturbation") {
  std::mt19937_64 rng(36);
  for (double delta : {0.5, 3.0}) {
    const auto h = chain(8, 0.0, delta, rng());
    Eigen::Vector4cd edge = oracle::random_state(4, rng);
    const auto v0 = prepare_state(LogicalPrep::two_qubit(edge), 8);
    const auto ts = evolve_and_sample(h, v0, IntegratorConfig{}, SamplingSchedule{100.0, 10},
                                      edge_observables(8), edge_observable_names());
    double worst = 0.0;
    for (std::size_t k = 0; k < ts.size(); ++k) {
      for (std::size_t o = 0; o < 15; ++o) worst = std::max(worst, std::abs(ts.values[k][o] - ts.values[0][o]));
    }
    CHECK(worst <= 1e-8);
  }
}

TEST_CASE("the t = 0 sample is the preparation") {
  const auto h = chain(6, 0.1, 1.0, 37);
  const auto v0 = prepare_state(LogicalPrep::product(qubits::minus_i(), qubits::plus()), 6);
  const auto obs = edge_observables(6);
  const auto ts = evolve_and_sample(h, v0, IntegratorConfig{}, SamplingSchedule{1.0, 10}, obs,
                                    edge_observable_names());
  CHECK(ts.times == std::vector<double>{0.0, 1.0});
  for (std::size_t o = 0; o < obs.size(); ++o) CHECK(ts.values[0][o] == expectation(obs[o], v0));
  CHECK(ts.values[0][ts.column("Y_L")] == doctest::Approx(-1.0));
  CHECK(ts.values[0][ts.column("X_R")] == doctest::Approx(1.0));
  CHECK_THROWS_AS((void)ts.column("W_L"), ContractViolation);
}

TEST_CASE("sample times are exact multiples of the step") {
  const auto h = chain(5, 0.1, 1.0, 38);
  std::vector<double> times;
  evolve(h, StateVector(5), IntegratorConfig{}, SamplingSchedule{30.0, 10},
         [&](std::size_t, double t, const StateVector&) { times.push_back(t); });
  REQUIRE(times.size() == 31);
  for (std::size_t k = 0; k < times.size(); ++k) CHECK(times[k] == static_cast<double>(k));
}

TEST_CASE("configuration and integration errors") {
  CHECK_THROWS_AS(SamplingSchedule({10.05, 10}).validate(0.1), ConfigError);
  CHECK_THROWS_AS(SamplingSchedule({10.5, 10}).validate(0.1), ConfigError);
  CHECK_NOTHROW(SamplingSchedule({10.0, 10}).validate(0.1));
  IntegratorConfig bad;
  bad.dt = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);

  IntegratorConfig tiny;
  tiny.max_krylov_dim = 2;
  const auto h = chain(6, 0.1, 1.0, 39);
  Propagator prop(h, tiny);
  std::mt19937_64 rng(1);
  StateVector v(6, oracle::random_state(64, rng));
  try {
    prop.step(v.amplitudes(), 4.5);
    FAIL("expected an IntegrationError");
  } catch (const IntegrationError& e) {
    CHECK(e.time() == 4.5);
    CHECK(e.krylov_dim() == 2);
    CHECK(e.error_estimate() > tiny.krylov_tolerance);
  }
}

TEST_CASE("time-series CSV layout") {
  const auto h = chain(5, 0.1, 1.0, 40);
  const auto ts = evolve_and_sample(h, StateVector(5), IntegratorConfig{}, SamplingSchedule{2.0, 10},
                                    edge_observables(5), edge_observable_names());
  std::ostringstream os;
  write_csv(os, ts);
  std::istringstream is(os.str());
  std::string header;
  std::getline(is, header);
  CHECK(header.rfind("t,X_L,Y_L,Z_L,X_R,Y_R,Z_R,X_LX_R,", 0) == 0);
  CHECK(header.substr(header.size() - 12) == ",norm,energy");
  int rows = 0;
  for (std::string line; std::getline(is, line);) ++rows;
  CHECK(rows == 3);
}
