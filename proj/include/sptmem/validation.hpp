#pragma once

// End-to-end invariant checks against the dense oracles. The CLI `validate`
// subcommand runs them at small sizes; the acceptance suite runs them at the
// sizes and tolerances of the acceptance criteria.

#include <cstdint>
#include <string>
#include <vector>

#include "sptmem/ensemble.hpp"

namespace sptmem {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// J = 0: I_X = I_Y = I_Z = 1 and C = 2 within tol at every sampled time.
CheckResult check_identity_channel(int n_sites, const std::vector<double>& deltas, int n_realizations,
                                   double t_max, double tol, std::uint64_t seed);

/// Random logical preparation propagated to t_final by the Krylov propagator
/// vs dense eigendecomposition; passes if 1 - fidelity <= tol.
CheckResult check_propagator_oracle(int n_sites, double J, double delta, double t_final, double tol,
                                    std::uint64_t seed);

/// Reconstructed edge states vs the disentangler partial trace at the first
/// n_times integer times (t = 1..n_times), over several preparations.
CheckResult check_tomography_oracle(int n_sites, double J, double delta, int n_times, double tol,
                                    std::uint64_t seed);

/// Every assembled channel at the given times passes validate_cptp(tol) and
/// the data-processing inequality holds on n_pairs random input pairs.
CheckResult check_cptp(int n_sites, double J, double delta, int n_realizations,
                       const std::vector<double>& times, int n_pairs, double tol, double dpi_slack,
                       std::uint64_t seed);

/// Trace-distance metric axioms, entropy reference values and coherent
/// information of identity/depolarizing/dephasing channels.
CheckResult check_metric_properties(std::uint64_t seed);

/// Edge operators commute exactly with H0 and H respects time reversal.
CheckResult check_symmetries(int n_sites, std::uint64_t seed);

std::vector<CheckResult> validate(const ExperimentConfig& cfg);

}  // namespace sptmem
