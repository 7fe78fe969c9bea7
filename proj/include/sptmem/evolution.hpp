#pragma once

#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "sptmem/spin_core.hpp"

namespace sptmem {

enum class IntegrationMethod { krylov, rk4 };

struct IntegratorConfig {
  double dt = 0.1;
  IntegrationMethod method = IntegrationMethod::krylov;
  double krylov_tolerance = 1e-9;
  int max_krylov_dim = 30;
  /// rk4 only: substeps per dt are ceil(dt * ||H||_bound / rk4_substep_scale).
  double rk4_substep_scale = 0.02;
  /// Largest accepted | ||v'|| - ||v|| | per step.
  double norm_drift_limit = 1e-10;

  void validate() const;
};

struct SamplingSchedule {
  double t_max = 2000.0;
  int sample_stride = 10;

  void validate(double dt) const;
  /// Total integration steps, t_max / dt.
  long total_steps(double dt) const;
};

/// exp(-i H dt) acting in place, with per-worker scratch space.
class Propagator {
 public:
  Propagator(const WeightedPauliSum& h, IntegratorConfig cfg);

  /// Advances `v` by one dt. Throws IntegrationError on Krylov
  /// non-convergence or excessive norm drift; `t` only labels diagnostics.
  void step(Amplitudes& v, double t = 0.0);

  const IntegratorConfig& config() const { return cfg_; }
  const SumOperator& op() const { return op_; }
  /// Krylov dimension used by the last step (0 for rk4 or H = 0).
  int last_krylov_dim() const { return last_dim_; }

 private:
  void krylov_step(Amplitudes& v, double t);
  void rk4_step(Amplitudes& v);

  SumOperator op_;
  IntegratorConfig cfg_;
  bool zero_operator_;
  int last_dim_ = 0;
  std::vector<Amplitudes> basis_;
  Amplitudes w_, k1_, k2_, k3_, k4_, tmp_;
};

StateVector step(const WeightedPauliSum& h, const StateVector& v, const IntegratorConfig& cfg);

/// Expectation values on a sampling grid.
struct TimeSeries {
  std::vector<std::string> names;
  std::vector<double> times;
  std::vector<std::vector<double>> values;  // values[time][observable]
  std::vector<double> norm;
  std::vector<double> energy;

  std::size_t size() const { return times.size(); }
  /// Column index of a named observable; throws if absent.
  std::size_t column(const std::string& name) const;
};

/// Calls back with (sample index, time, state) at every sampled time,
/// including t = 0.
using SampleCallback = std::function<void(std::size_t, double, const StateVector&)>;
void evolve(const WeightedPauliSum& h, const StateVector& v0, const IntegratorConfig& cfg,
            const SamplingSchedule& schedule, const SampleCallback& on_sample);

TimeSeries evolve_and_sample(const WeightedPauliSum& h, const StateVector& v0,
                             const IntegratorConfig& cfg, const SamplingSchedule& schedule,
                             const std::vector<PauliString>& observables,
                             std::vector<std::string> names = {});

/// The 15 non-identity edge-operator products with their column names:
/// X_L, Y_L, Z_L, X_R, Y_R, Z_R, then X_LX_R, X_LY_R, ..., Z_LZ_R.
std::vector<PauliString> edge_observables(int n_sites);
std::vector<std::string> edge_observable_names();

/// CSV: t, observables..., norm, energy.
void write_csv(std::ostream& os, const TimeSeries& ts);

}  // namespace sptmem
