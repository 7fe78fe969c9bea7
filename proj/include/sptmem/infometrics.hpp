#pragma once

// Information measures on edge states and reconstructed channels. Entropies
// and capacities are in bits.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "sptmem/tomography.hpp"

namespace sptmem {

/// Eigenvalues below this are treated as tomographic noise and clamped to 0
/// by von_neumann_entropy; anything lower is an error.
inline constexpr double kEigenvalueFloor = -1e-7;

/// (1/2) ||rho - sigma||_1. Throws ContractViolation for non-Hermitian input.
double trace_distance(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& sigma);
double trace_distance(const EdgeState& rho, const EdgeState& sigma);

/// 1/2 + d/2.
double distinguish_probability(double d);

/// 1 - H2(p), the binary symmetric channel capacity at success probability p
/// in [1/2, 1].
double classical_capacity_lower(double p);

/// -sum lambda log2 lambda.
double von_neumann_entropy(const Eigen::MatrixXcd& rho);

/// Which orthogonal eigenvector pair of sigma^a (x) sigma^a encodes the bit.
enum class EncodingPair {
  both_edges,  // |a+, a+> vs |a-, a->
  left_edge,   // |a+, a+> vs |a-, a+>
};

std::string to_string(EncodingPair p);
EncodingPair parse_encoding_pair(const std::string& s);

struct DirectedEncoding {
  Axis axis;
  Eigen::Vector4cd psi;  // edge-basis amplitudes
  Eigen::Vector4cd phi;
};

DirectedEncoding directed_encoding(Axis axis, EncodingPair pair = EncodingPair::both_edges);

/// D between the two channel outputs of an encoding. Both outputs must carry
/// the same time stamp.
double directed_integrity(const EdgeState& out_psi, const EdgeState& out_phi);
/// I_X, I_Y, I_Z of a reconstructed channel.
std::array<double, 3> directed_integrities(const ChannelMatrix& ch,
                                           EncodingPair pair = EncodingPair::both_edges);

/// S(E(I/4)) - S(Choi(E)), the coherent information with a maximally
/// entangled input.
double coherent_information(const ChannelMatrix& ch);

struct RecoveryStats {
  std::string quantity_name;
  double threshold = 0.0;
  std::vector<double> times;
  std::vector<double> fraction;  // F(t) = N_rec(t) / N_tot
  int n_total = 0;
  /// First sampled time at which A(t) <= threshold, per realization.
  std::vector<std::optional<double>> first_crossing;
};

/// Survival fraction: a realization counts at t if A(t') > tau for every
/// sampled t' <= t. traces[r][k] is realization r at t_grid[k].
RecoveryStats recovery_fraction(const std::vector<std::vector<double>>& traces, double tau,
                                const std::vector<double>& t_grid,
                                std::string quantity_name = {});

}  // namespace sptmem
