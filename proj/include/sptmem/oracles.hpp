#pragma once

// Dense reference constructions used to check the matrix-free pipeline.
// Everything here is built from explicit Kronecker products and full
// eigendecompositions; nothing goes through the bitmask Pauli code.

#include <random>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "sptmem/model.hpp"
#include "sptmem/tomography.hpp"

namespace sptmem::oracle {

/// Dense matrix of a Pauli word like "XZX", site 1 leftmost in the Kronecker
/// product (so site 1 is the most significant index bit).
Eigen::MatrixXcd dense_word(std::string_view word);

/// H from its defining formula, h[k] = h_{k+2}.
Eigen::MatrixXcd dense_hamiltonian(int n_sites, double J, const std::vector<double>& h);

/// exp(-i H t) psi through a full eigendecomposition.
Eigen::VectorXcd dense_propagate(const Eigen::MatrixXcd& h, const Eigen::VectorXcd& psi, double t);

/// Reduced logical edge state of a chain state: apply H on site 2 and
/// CNOT(2 -> 1), mirror on the right (H on N-1, CNOT(N-1 -> N)), then trace
/// out sites 2..N-1. Returned in the kEdgeBasis order.
Matrix4c disentangled_edge_state(const Eigen::VectorXcd& psi, int n_sites);

/// Matrix form of rho -> U rho U^dagger in the row-major vectorization.
Matrix16c unitary_superoperator(const Matrix4c& u);
/// Matrix form of rho -> sum_k K_k rho K_k^dagger.
Matrix16c kraus_superoperator(const std::vector<Matrix4c>& kraus);
/// Choi state sum_k (K_k (x) I)|Omega><Omega|(K_k (x) I)^dagger.
Matrix16c kraus_choi(const std::vector<Matrix4c>& kraus);

Eigen::VectorXcd random_state(Eigen::Index dim, std::mt19937_64& rng);
Eigen::MatrixXcd random_unitary(Eigen::Index dim, std::mt19937_64& rng);
/// Full-rank random density matrix (Ginibre ensemble).
Eigen::MatrixXcd random_density_matrix(Eigen::Index dim, std::mt19937_64& rng);
/// Random CPTP map with `n_kraus` operators (Stinespring isometry slices).
std::vector<Matrix4c> random_kraus(int n_kraus, std::mt19937_64& rng);

}  // namespace sptmem::oracle
