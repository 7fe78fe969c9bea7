#include "sptmem/evolution.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "sptmem/errors.hpp"
#include "sptmem/model.hpp"

namespace sptmem {

void IntegratorConfig::validate() const {
  if (!(dt > 0.0)) throw ConfigError("dt must be > 0");
  if (!(krylov_tolerance > 0.0)) throw ConfigError("krylov_tolerance must be > 0");
  if (max_krylov_dim < 2) throw ConfigError("max_krylov_dim must be >= 2");
  if (!(rk4_substep_scale > 0.0)) throw ConfigError("rk4_substep_scale must be > 0");
  if (!(norm_drift_limit > 0.0)) throw ConfigError("norm_drift_limit must be > 0");
}

void SamplingSchedule::validate(double dt) const {
  if (!(t_max > 0.0)) throw ConfigError("t_max must be > 0");
  if (sample_stride < 1) throw ConfigError("sample_stride must be >= 1");
  const long n = total_steps(dt);
  if (std::abs(static_cast<double>(n) * dt - t_max) > 1e-9 * std::max(1.0, t_max)) {
    throw ConfigError(fmt::format("dt = {} does not divide t_max = {}", dt, t_max));
  }
  if (n % sample_stride != 0) {
    throw ConfigError(fmt::format("t_max = {} is not a multiple of the sample interval {}", t_max,
                                  sample_stride * dt));
  }
}

long SamplingSchedule::total_steps(double dt) const { return std::lround(t_max / dt); }

// ---------------------------------------------------------------------------

Propagator::Propagator(const WeightedPauliSum& h, IntegratorConfig cfg)
    : op_(h), cfg_(cfg), zero_operator_(h.norm_bound() == 0.0) {
  cfg_.validate();
}

void Propagator::step(Amplitudes& v, double t) {
  if (zero_operator_) {
    last_dim_ = 0;
    return;
  }
  const double before = v.norm();
  if (cfg_.method == IntegrationMethod::krylov) {
    krylov_step(v, t);
  } else {
    rk4_step(v);
  }
  const double drift = std::abs(v.norm() - before);
  if (drift > cfg_.norm_drift_limit) {
    throw IntegrationError(fmt::format("norm drift {:.3e} at t = {} exceeds limit {:.1e}", drift,
                                       t, cfg_.norm_drift_limit),
                           t, last_dim_, drift);
  }
}

void Propagator::krylov_step(Amplitudes& v, double t) {
  const double beta0 = v.norm();
  if (beta0 == 0.0) return;
  const Eigen::Index dim = v.size();
  const int m_max = static_cast<int>(std::min<Eigen::Index>(cfg_.max_krylov_dim, dim));
  if (static_cast<int>(basis_.size()) < m_max) basis_.resize(static_cast<std::size_t>(m_max));

  std::vector<double> alpha, beta;
  alpha.reserve(static_cast<std::size_t>(m_max));
  beta.reserve(static_cast<std::size_t>(m_max));
  basis_[0] = v / beta0;

  Eigen::VectorXcd coeffs;
  double err = 0.0;
  const int check_from = std::max(1, last_dim_ - 2);
  for (int j = 0; j < m_max; ++j) {
    const auto& q = basis_[static_cast<std::size_t>(j)];
    op_.apply(q, w_);
    const double a = q.dot(w_).real();
    w_ -= a * q;
    if (j > 0) w_ -= beta[static_cast<std::size_t>(j - 1)] * basis_[static_cast<std::size_t>(j - 1)];
    for (int i = 0; i <= j; ++i) {
      const auto& qi = basis_[static_cast<std::size_t>(i)];
      w_ -= qi.dot(w_) * qi;
    }
    const double b = w_.norm();
    alpha.push_back(a);
    const int m = j + 1;

    if (m >= check_from || m == dim) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
      Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), m);
      Eigen::VectorXd sub = m > 1 ? Eigen::VectorXd(Eigen::Map<Eigen::VectorXd>(beta.data(), m - 1))
                                  : Eigen::VectorXd();
      es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
      const auto& vecs = es.eigenvectors();
      const auto& vals = es.eigenvalues();
      Eigen::VectorXcd phase(m);
      for (int l = 0; l < m; ++l) {
        phase[l] = vecs(0, l) * std::exp(cplx(0.0, -cfg_.dt * vals[l]));
      }
      coeffs = vecs.cast<cplx>() * phase;
      err = b * std::abs(coeffs[m - 1]) * beta0;
      if (err <= cfg_.krylov_tolerance || m == dim) {
        last_dim_ = m;
        v.setZero();
        for (int k = 0; k < m; ++k) v += (beta0 * coeffs[k]) * basis_[static_cast<std::size_t>(k)];
        return;
      }
    }
    if (m == m_max) break;
    beta.push_back(b);
    basis_[static_cast<std::size_t>(j + 1)] = w_ / b;
  }
  last_dim_ = m_max;
  throw IntegrationError(fmt::format("Krylov propagator did not converge at t = {} "
                                     "(dim {}, error estimate {:.3e}, tolerance {:.1e})",
                                     t, m_max, err, cfg_.krylov_tolerance),
                         t, m_max, err);
}

void Propagator::rk4_step(Amplitudes& v) {
  const int n_sub = std::max(
      1, static_cast<int>(std::ceil(cfg_.dt * op_.norm_bound() / cfg_.rk4_substep_scale)));
  const double h = cfg_.dt / n_sub;
  const cplx mi(0.0, -1.0);
  last_dim_ = 0;
  for (int s = 0; s < n_sub; ++s) {
    op_.apply(v, k1_);
    k1_ *= mi;
    tmp_ = v + (0.5 * h) * k1_;
    op_.apply(tmp_, k2_);
    k2_ *= mi;
    tmp_ = v + (0.5 * h) * k2_;
    op_.apply(tmp_, k3_);
    k3_ *= mi;
    tmp_ = v + h * k3_;
    op_.apply(tmp_, k4_);
    k4_ *= mi;
    v += (h / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
  }
}

StateVector step(const WeightedPauliSum& h, const StateVector& v, const IntegratorConfig& cfg) {
  if (h.n_sites() != v.n_sites()) throw ContractViolation("step: size mismatch");
  Propagator prop(h, cfg);
  Amplitudes a = v.amplitudes();
  prop.step(a);
  return StateVector(v.n_sites(), std::move(a));
}

// ---------------------------------------------------------------------------

std::size_t TimeSeries::column(const std::string& name) const {
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw ContractViolation(fmt::format("no column '{}'", name));
  return static_cast<std::size_t>(it - names.begin());
}

void evolve(const WeightedPauliSum& h, const StateVector& v0, const IntegratorConfig& cfg,
            const SamplingSchedule& schedule, const SampleCallback& on_sample) {
  if (h.n_sites() != v0.n_sites()) throw ContractViolation("evolve: size mismatch");
  cfg.validate();
  schedule.validate(cfg.dt);
  Propagator prop(h, cfg);
  StateVector v = v0;
  const long n_steps = schedule.total_steps(cfg.dt);
  std::size_t sample = 0;
  on_sample(sample++, 0.0, v);
  for (long s = 1; s <= n_steps; ++s) {
    prop.step(v.amplitudes(), static_cast<double>(s - 1) * cfg.dt);
    if (s % schedule.sample_stride == 0) {
      on_sample(sample++, static_cast<double>(s) * cfg.dt, v);
    }
  }
}

TimeSeries evolve_and_sample(const WeightedPauliSum& h, const StateVector& v0,
                             const IntegratorConfig& cfg, const SamplingSchedule& schedule,
                             const std::vector<PauliString>& observables,
                             std::vector<std::string> names) {
  for (const auto& p : observables) {
    if (!p.is_hermitian()) {
      throw ContractViolation(fmt::format("observable {} is not Hermitian", p.to_string()));
    }
  }
  if (names.empty()) {
    for (const auto& p : observables) names.push_back(p.to_string());
  }
  if (names.size() != observables.size()) {
    throw ContractViolation("observable names and operators differ in count");
  }
  TimeSeries ts;
  ts.names = std::move(names);
  evolve(h, v0, cfg, schedule, [&](std::size_t, double t, const StateVector& v) {
    ts.times.push_back(t);
    std::vector<double> row;
    row.reserve(observables.size());
    for (const auto& p : observables) row.push_back(expectation(p, v));
    ts.values.push_back(std::move(row));
    ts.norm.push_back(v.norm());
    ts.energy.push_back(expectation(h, v));
  });
  return ts;
}

std::vector<PauliString> edge_observables(int n_sites) {
  const auto ops = edge_operators(n_sites);
  std::vector<PauliString> out(ops.left.begin(), ops.left.end());
  out.insert(out.end(), ops.right.begin(), ops.right.end());
  for (const auto& l : ops.left) {
    for (const auto& r : ops.right) out.push_back(l * r);
  }
  return out;
}

std::vector<std::string> edge_observable_names() {
  static const char* kAxes[3] = {"X", "Y", "Z"};
  std::vector<std::string> names;
  for (const char* a : kAxes) names.push_back(fmt::format("{}_L", a));
  for (const char* a : kAxes) names.push_back(fmt::format("{}_R", a));
  for (const char* l : kAxes) {
    for (const char* r : kAxes) names.push_back(fmt::format("{}_L{}_R", l, r));
  }
  return names;
}

void write_csv(std::ostream& os, const TimeSeries& ts) {
  os << "t";
  for (const auto& n : ts.names) os << ',' << n;
  os << ",norm,energy\n";
  for (std::size_t i = 0; i < ts.size(); ++i) {
    os << fmt::format("{}", ts.times[i]);
    for (double x : ts.values[i]) os << fmt::format(",{}", x);
    os << fmt::format(",{},{}\n", ts.norm[i], ts.energy[i]);
  }
}

}  // namespace sptmem
