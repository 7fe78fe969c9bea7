#include "sptmem/validation.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <fmt/format.h>

#include "sptmem/oracles.hpp"

namespace sptmem {

namespace {

ExperimentConfig small_config(int n_sites, double t_max, std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.n_sites = n_sites;
  cfg.t_max = t_max;
  cfg.dt = 0.1;
  cfg.sample_stride = 10;
  cfg.master_seed = seed;
  return cfg;
}

Eigen::Vector4cd random_edge(std::mt19937_64& rng) {
  return oracle::random_state(4, rng);
}

BulkSpec random_bulk(int n_sites, std::mt19937_64& rng) {
  BulkSpec b;
  b.kind = BulkSpec::Kind::fixed_product;
  for (int k = 0; k < n_sites - 4; ++k) {
    const Eigen::VectorXcd q = oracle::random_state(2, rng);
    b.sites.push_back({q[0], q[1]});
  }
  return b;
}

Matrix4c hermitian_part(const Matrix4c& m) { return 0.5 * (m + m.adjoint()); }

}  // namespace

CheckResult check_identity_channel(int n_sites, const std::vector<double>& deltas, int n_realizations,
                                   double t_max, double tol, std::uint64_t seed) {
  CheckResult res{"identity channel at J = 0", true, {}};
  const ExperimentConfig cfg = small_config(n_sites, t_max, seed);
  double worst_i = 0.0, worst_c = 0.0;
  std::size_t samples = 0;
  for (double delta : deltas) {
    for (int r = 0; r < n_realizations; ++r) {
      const ResultRecord rec = run_realization(cfg, 0.0, delta, r);
      if (rec.error) {
        res.passed = false;
        res.detail = *rec.error;
        return res;
      }
      for (const auto& row : rec.rows) {
        worst_i = std::max({worst_i, std::abs(row.I_x - 1.0), std::abs(row.I_y - 1.0),
                            std::abs(row.I_z - 1.0)});
        worst_c = std::max(worst_c, std::abs(row.coherent_info - 2.0));
        ++samples;
      }
    }
  }
  res.passed = worst_i <= tol && worst_c <= tol;
  res.detail = fmt::format("N={} {} samples, max |I-1| = {:.2e}, max |C-2| = {:.2e} (tol {:.0e})",
                           n_sites, samples, worst_i, worst_c, tol);
  return res;
}

CheckResult check_propagator_oracle(int n_sites, double J, double delta, double t_final, double tol,
                                    std::uint64_t seed) {
  CheckResult res{"Krylov propagator vs dense eigendecomposition", true, {}};
  std::mt19937_64 rng(seed);
  const ModelParams params{n_sites, J, delta, seed};
  const auto dis = sample_disorder(params, 0);
  const auto h = build_hamiltonian(params, dis);
  const StateVector v0 = prepare_state(LogicalPrep::two_qubit(random_edge(rng), random_bulk(n_sites, rng)), n_sites);

  IntegratorConfig cfg;
  Propagator prop(h, cfg);
  Amplitudes v = v0.amplitudes();
  const long steps = std::lround(t_final / cfg.dt);
  for (long s = 0; s < steps; ++s) prop.step(v, static_cast<double>(s) * cfg.dt);

  const Eigen::VectorXcd ref =
      oracle::dense_propagate(oracle::dense_hamiltonian(n_sites, J, dis.h), v0.amplitudes(), t_final);
  const double infidelity = 1.0 - std::norm(ref.dot(v));
  res.passed = infidelity <= tol;
  res.detail = fmt::format("N={} t={} 1 - fidelity = {:.2e} (tol {:.0e})", n_sites, t_final,
                           infidelity, tol);
  return res;
}

CheckResult check_tomography_oracle(int n_sites, double J, double delta, int n_times, double tol,
                                    std::uint64_t seed) {
  CheckResult res{"edge tomography vs disentangler partial trace", true, {}};
  std::mt19937_64 rng(seed);
  const ModelParams params{n_sites, J, delta, seed};
  const auto h = build_hamiltonian(params, sample_disorder(params, 0));
  const SamplingSchedule schedule{static_cast<double>(n_times), 10};

  std::vector<LogicalPrep> preps;
  preps.push_back(LogicalPrep::product(qubits::up(), qubits::plus_i()));
  preps.push_back(LogicalPrep::two_qubit(random_edge(rng), BulkSpec{BulkSpec::Kind::all_plus, {}}));
  preps.push_back(LogicalPrep::two_qubit(random_edge(rng), random_bulk(n_sites, rng)));

  double worst = 0.0;
  std::size_t compared = 0;
  for (const auto& prep : preps) {
    evolve(h, prepare_state(prep, n_sites), IntegratorConfig{}, schedule,
           [&](std::size_t, double t, const StateVector& v) {
             const EdgeState rec = reconstruct_edge_state(measure_edge_expectations(v), t);
             const Matrix4c ref = oracle::disentangled_edge_state(v.amplitudes(), n_sites);
             worst = std::max(worst, trace_distance(Eigen::MatrixXcd(rec.rho), Eigen::MatrixXcd(hermitian_part(ref))));
             ++compared;
           });
  }
  res.passed = worst <= tol;
  res.detail = fmt::format("N={} {} sampled states, max trace distance {:.2e} (tol {:.0e})", n_sites,
                           compared, worst, tol);
  return res;
}

CheckResult check_cptp(int n_sites, double J, double delta, int n_realizations,
                       const std::vector<double>& times, int n_pairs, double tol, double dpi_slack,
                       std::uint64_t seed) {
  CheckResult res{"CPTP certificate and data processing", true, {}};
  std::mt19937_64 rng(seed);
  const double t_max = *std::max_element(times.begin(), times.end());
  const ModelParams base{n_sites, J, delta, seed};
  double worst_tp = 0.0, worst_eig = 1.0, worst_herm = 0.0, worst_dpi = -1.0;
  std::size_t channels = 0;
  for (int r = 0; r < n_realizations; ++r) {
    const auto h = build_hamiltonian(base, sample_disorder(base, r));
    const auto tomo = run_input_set(h, BulkSpec{}, IntegratorConfig{}, SamplingSchedule{t_max, 10});
    for (double t : times) {
      const auto it = std::find_if(tomo.times.begin(), tomo.times.end(),
                                   [t](double s) { return std::abs(s - t) < 1e-9; });
      if (it == tomo.times.end()) {
        res.passed = false;
        res.detail = fmt::format("time {} not on the sampling grid", t);
        return res;
      }
      const ChannelMatrix ch = assemble_channel(tomo.edge_states[static_cast<std::size_t>(it - tomo.times.begin())]);
      const CptpReport rep = validate_cptp(ch, tol);
      res.passed = res.passed && rep.passed();
      worst_tp = std::max(worst_tp, rep.tp_error);
      worst_herm = std::max(worst_herm, rep.choi_hermiticity_error);
      worst_eig = std::min(worst_eig, rep.choi_min_eigenvalue);
      for (int p = 0; p < n_pairs; ++p) {
        const Matrix4c rho = oracle::random_density_matrix(4, rng);
        const Matrix4c sigma = p % 2 == 0 ? Matrix4c(projector(oracle::random_state(4, rng)))
                                          : Matrix4c(oracle::random_density_matrix(4, rng));
        const double before = trace_distance(Eigen::MatrixXcd(rho), Eigen::MatrixXcd(sigma));
        const double after = trace_distance(Eigen::MatrixXcd(hermitian_part(ch.apply(rho))),
                                            Eigen::MatrixXcd(hermitian_part(ch.apply(sigma))));
        worst_dpi = std::max(worst_dpi, after - before);
      }
      ++channels;
    }
  }
  if (worst_dpi > dpi_slack) res.passed = false;
  res.detail = fmt::format(
      "N={} {} channels: max tp error {:.2e}, max Choi hermiticity error {:.2e}, min Choi "
      "eigenvalue {:.2e} (tol {:.0e}); max D(E rho, E sigma) - D(rho, sigma) = {:.2e} (slack {:.0e})",
      n_sites, channels, worst_tp, worst_herm, worst_eig, tol, worst_dpi, dpi_slack);
  return res;
}

CheckResult check_metric_properties(std::uint64_t seed) {
  CheckResult res{"information measure properties", true, {}};
  std::mt19937_64 rng(seed);
  std::vector<std::string> failures;
  double worst_triangle = 0.0;
  for (int k = 0; k < 200; ++k) {
    const Eigen::MatrixXcd a = oracle::random_density_matrix(4, rng);
    // Every third triple has a pure middle state so the D = 1 edge gets exercised too.
    const Eigen::MatrixXcd bh = k % 3 == 0 ? Eigen::MatrixXcd(projector(oracle::random_state(4, rng)))
                                           : oracle::random_density_matrix(4, rng);
    const Eigen::MatrixXcd c = oracle::random_density_matrix(4, rng);
    const double ab = trace_distance(a, bh), ba = trace_distance(bh, a);
    const double ac = trace_distance(a, c), cb = trace_distance(c, bh);
    if (std::abs(ab - ba) > 1e-14) failures.push_back("symmetry");
    if (ab < 0.0 || ab > 1.0 + 1e-12) failures.push_back("range");
    if (trace_distance(a, a) != 0.0) failures.push_back("identity of indiscernibles");
    worst_triangle = std::max(worst_triangle, ab - (ac + cb));
  }
  if (worst_triangle > 1e-10) failures.push_back("triangle inequality");

  const auto pure = projector(oracle::random_state(4, rng));
  if (std::abs(von_neumann_entropy(pure)) > 1e-10) failures.push_back("S(pure) != 0");
  if (std::abs(von_neumann_entropy(Eigen::MatrixXcd::Identity(4, 4) / 4.0) - 2.0) > 1e-12) failures.push_back("S(I/4) != 2");
  if (std::abs(von_neumann_entropy(Eigen::MatrixXcd::Identity(16, 16) / 16.0) - 4.0) > 1e-12) failures.push_back("S(I/16) != 4");

  ChannelMatrix depol{0.0, Matrix16c::Zero()};
  ChannelMatrix dephase{0.0, Matrix16c::Zero()};
  for (int a = 0; a < 4; ++a) {
    for (int m = 0; m < 4; ++m) depol.m(5 * a, 5 * m) = 0.25;
    dephase.m(5 * a, 5 * a) = 1.0;
  }
  if (std::abs(coherent_information(ChannelMatrix::identity()) - 2.0) > 1e-10) failures.push_back("C(identity) != 2");
  if (std::abs(coherent_information(depol) + 2.0) > 1e-10) failures.push_back("C(depolarizing) != -2");
  if (std::abs(coherent_information(dephase)) > 1e-10) failures.push_back("C(dephasing) != 0");

  res.passed = failures.empty();
  res.detail = failures.empty() ? fmt::format("200 random triples, worst triangle excess {:.2e}", worst_triangle)
                                : fmt::format("failed: {}", fmt::join(failures, ", "));
  return res;
}

CheckResult check_symmetries(int n_sites, std::uint64_t seed) {
  CheckResult res{"edge-mode commutation and time reversal", true, {}};
  const ModelParams free{n_sites, 0.0, 3.0, seed};
  const ModelParams interacting{n_sites, 0.1, 3.0, seed};
  const auto ops = edge_operators(n_sites);
  std::vector<std::string> failures;
  for (int r = 0; r < 5; ++r) {
    const auto dis = sample_disorder(free, r);
    if (!check_edge_commutation(build_hamiltonian(free, dis), ops).all_commute()) {
      failures.push_back(fmt::format("H0 realization {} breaks edge commutation", r));
    }
    if (!check_time_reversal(build_hamiltonian(interacting, dis)).passed()) {
      failures.push_back(fmt::format("H realization {} breaks time reversal", r));
    }
  }
  if (check_edge_commutation(build_hamiltonian(interacting, sample_disorder(interacting, 0)), ops).all_commute()) {
    failures.push_back("Ising terms unexpectedly commute with the edge operators");
  }
  res.passed = failures.empty();
  res.detail = failures.empty() ? fmt::format("N={}, 5 realizations", n_sites)
                                : fmt::format("{}", fmt::join(failures, "; "));
  return res;
}

std::vector<CheckResult> validate(const ExperimentConfig& cfg) {
  const int n = std::clamp(cfg.n_sites, 6, 8);
  const std::uint64_t seed = cfg.master_seed;
  std::vector<CheckResult> out;
  out.push_back(check_symmetries(n, seed));
  out.push_back(check_metric_properties(seed));
  out.push_back(check_identity_channel(n, {0.5, 3.0}, 1, 20.0, 1e-7, seed));
  out.push_back(check_propagator_oracle(6, 0.1, 1.0, 10.0, 1e-8, seed));
  out.push_back(check_tomography_oracle(6, 0.1, 1.0, 5, 1e-8, seed));
  out.push_back(check_cptp(n, 0.1, 1.0, 2, {1.0, 10.0}, 20, 1e-6, 1e-7, seed));
  return out;
}

}  // namespace sptmem
