#pragma once

// Edge-state tomography and process tomography of the reduced edge dynamics.
//
// Two-qubit edge matrices use the kEdgeBasis order |uu>, |dd>, |ud>, |du>
// (left, right). A ChannelMatrix acts on row-major vectorized 4x4 operators:
// vec(A)[4a + b] = A(a, b), so column 4m + n of the matrix is E(|m><n|).

#include <array>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "sptmem/evolution.hpp"
#include "sptmem/model.hpp"

namespace sptmem {

using Matrix4c = Eigen::Matrix4cd;
using Matrix16c = Eigen::Matrix<cplx, 16, 16>;
using Vector16c = Eigen::Matrix<cplx, 16, 1>;

struct EdgeState {
  double t = 0.0;
  Matrix4c rho = Matrix4c::Zero();
  /// Frobenius norm of the anti-Hermitian part removed by reconstruction.
  double symmetrization_correction = 0.0;
};

struct ChannelMatrix {
  double t = 0.0;
  Matrix16c m = Matrix16c::Identity();

  /// E(rho) for a 4x4 operator in the edge basis.
  Matrix4c apply(const Matrix4c& rho) const;
  static ChannelMatrix identity(double t = 0.0);
};

struct ChoiState {
  /// Row index 4a + m: output basis state a, reference basis state m.
  Matrix16c rho = Matrix16c::Zero();
};

/// Pauli matrices in the single-qubit basis {|up>, |down>}; index 0 = I.
const std::array<Eigen::Matrix2cd, 4>& pauli_matrices();
/// sigma_L^i (x) sigma_R^j in the edge basis order.
Matrix4c edge_pauli(int i, int j);

Eigen::Vector4cd vec_to_edge(const Eigen::Vector4cd& tensor_order);
Matrix4c projector(const Eigen::Vector4cd& psi);

/// expectations[4 i + j] = <O_L^i O_R^j>, i, j in {0 = identity, x, y, z}.
using EdgeExpectations = std::array<double, 16>;

/// rho = 1/4 sum_ij <O_L^i O_R^j> sigma_L^i (x) sigma_R^j, Hermitian-symmetrized.
/// Throws NormalizationError when the identity entry is not 1 within 1e-8.
EdgeState reconstruct_edge_state(const EdgeExpectations& expectations, double t = 0.0);
/// Inverse map: tr(rho sigma_L^i (x) sigma_R^j).
EdgeExpectations edge_expectations(const Matrix4c& rho);
/// Measures the 15 edge products plus norm^2 on a chain state.
EdgeExpectations measure_edge_expectations(const StateVector& v);

struct TomographyInput {
  std::string label;
  LogicalPrep prep;
};

/// 4 basis inputs |m>, then for each m < n: (|m>+|n>)/sqrt2, (|m>+i|n>)/sqrt2.
std::vector<TomographyInput> input_set(const BulkSpec& bulk);

/// edge_states[sample][input] for the 16 inputs of input_set().
struct InputSetResult {
  std::vector<double> times;
  std::vector<std::array<EdgeState, 16>> edge_states;
};

InputSetResult run_input_set(const WeightedPauliSum& h, const BulkSpec& bulk,
                             const IntegratorConfig& cfg, const SamplingSchedule& schedule);

/// Builds E_t from the 16 outputs at one time. Throws ContractViolation if
/// the timestamps differ.
ChannelMatrix assemble_channel(std::span<const EdgeState, 16> outputs);

ChoiState channel_to_choi(const ChannelMatrix& m);

struct CptpReport {
  double tp_error = 0.0;           // max_mn |tr E(|m><n|) - delta_mn|
  double choi_hermiticity_error = 0.0;
  double choi_min_eigenvalue = 0.0;
  double tolerance = 0.0;

  bool passed() const;
};

CptpReport validate_cptp(const ChannelMatrix& m, double tol = 1e-6);

/// JSON dumps: matrices as row-major arrays of [re, im] pairs.
nlohmann::json matrix_to_json(const Matrix16c& m);
nlohmann::json conventions_json();

}  // namespace sptmem
