#pragma once

#include <stdexcept>
#include <string>

namespace sptmem {

/// Precondition failure in a library call (size mismatch, non-Hermitian
/// operator where one is required, ...).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A state or density matrix failed its normalization requirement.
class NormalizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The propagator could not advance the state within its error budget.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double t, int krylov_dim,
                   double error_estimate)
      : std::runtime_error(what),
        t_(t),
        krylov_dim_(krylov_dim),
        error_estimate_(error_estimate) {}

  double time() const { return t_; }
  int krylov_dim() const { return krylov_dim_; }
  double error_estimate() const { return error_estimate_; }

 private:
  double t_;
  int krylov_dim_;
  double error_estimate_;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Existing output directory was produced by a different configuration.
class ResumeConflict : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sptmem
