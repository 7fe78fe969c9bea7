#pragma once

// Small random generators for property tests. Each takes the engine by
// reference so a test case draws a reproducible sequence from one seed.

#include <random>
#include <string>

#include "sptmem/model.hpp"
#include "sptmem/spin_core.hpp"

namespace gen {

inline std::string pauli_word(std::mt19937_64& rng, int n) {
  static constexpr char kLetters[] = {'I', 'X', 'Y', 'Z'};
  std::uniform_int_distribution<int> pick(0, 3);
  std::string w;
  for (int i = 0; i < n; ++i) w += kLetters[pick(rng)];
  return w;
}

inline sptmem::PauliString pauli(std::mt19937_64& rng, int n) {
  const auto base = sptmem::PauliString::parse(pauli_word(rng, n));
  const int phase = std::uniform_int_distribution<int>(0, 3)(rng);
  return sptmem::PauliString(n, base.x_mask(), base.z_mask(), (base.phase() + phase) % 4);
}

/// Hermitian sum of `terms` random words with coefficients in [-2, 2].
inline sptmem::WeightedPauliSum pauli_sum(std::mt19937_64& rng, int n, int terms) {
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  sptmem::WeightedPauliSum h(n);
  for (int k = 0; k < terms; ++k) h.add(coef(rng), sptmem::PauliString::parse(pauli_word(rng, n)));
  return h;
}

inline int integer(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline double real(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace gen
