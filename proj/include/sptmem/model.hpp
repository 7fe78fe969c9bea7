#pragma once

// Disordered XZX cluster chain with Ising perturbation, its six edge
// operators and logical edge-qubit preparations.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "sptmem/spin_core.hpp"

namespace sptmem {

struct ModelParams {
  int n_sites = 14;
  double J = 0.1;
  double delta = 1.0;
  std::uint64_t master_seed = 0;

  void validate() const;
};

struct DisorderRealization {
  std::vector<double> h;  // h[0] is h_2, h.back() is h_{N-1}
  int realization_index = 0;
  std::uint64_t derived_seed = 0;

  int n_sites() const { return static_cast<int>(h.size()) + 2; }
  /// Coupling offset h_j for 2 <= j <= N-1.
  double at(int site) const;
};

void to_json(nlohmann::json& j, const DisorderRealization& d);

/// Stable 64-bit mix of (master_seed, realization_index).
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t realization_index);

/// h_j i.i.d. uniform on [-delta/2, delta/2), j = 2..N-1 in order.
DisorderRealization sample_disorder(const ModelParams& params, int realization_index);

/// -sum_j (1+h_j) X_{j-1} Z_j X_{j+1} - J sum_j Z_j Z_{j+1}. Ising terms are
/// omitted when J == 0.
WeightedPauliSum build_hamiltonian(const ModelParams& params, const DisorderRealization& dis);

enum class Edge { left, right };
enum class Axis { x = 0, y = 1, z = 2 };

char axis_name(Axis a);

struct EdgeOperatorSet {
  std::array<PauliString, 3> left;   // O_L^x = X_1, O_L^y = Y_1 X_2, O_L^z = Z_1 X_2
  std::array<PauliString, 3> right;  // O_R^x = X_N, O_R^y = X_{N-1} Y_N, O_R^z = X_{N-1} Z_N

  const PauliString& get(Edge e, Axis a) const;
  /// The six operators in order x_L, y_L, z_L, x_R, y_R, z_R.
  std::array<PauliString, 6> all() const;
};

EdgeOperatorSet edge_operators(int n_sites);

struct CommutationReport {
  /// Term-by-term bound sum_k 2|c_k| over terms anticommuting with the
  /// operator, in the order of EdgeOperatorSet::all().
  std::array<double, 6> commutator_bound{};
  std::array<int, 6> anticommuting_terms{};

  bool all_commute() const;
};

CommutationReport check_edge_commutation(const WeightedPauliSum& h, const EdgeOperatorSet& ops);

struct TimeReversalReport {
  bool real_terms = true;        // every word has an even number of Y
  bool commutes_with_parity = true;  // every word has even X weight
  std::vector<std::size_t> non_real;
  std::vector<std::size_t> parity_odd;

  bool passed() const { return real_terms && commutes_with_parity; }
};

TimeReversalReport check_time_reversal(const WeightedPauliSum& h);

using Qubit = std::array<cplx, 2>;

namespace qubits {
Qubit up();
Qubit down();
Qubit plus();
Qubit minus();
Qubit plus_i();
Qubit minus_i();
}  // namespace qubits

/// Product state on sites 3..N-2.
struct BulkSpec {
  enum class Kind { all_up, all_plus, fixed_product };
  Kind kind = Kind::all_up;
  std::vector<Qubit> sites;  // fixed_product only, N-4 entries

  std::string name() const;
  static BulkSpec parse(const std::string& name);
  bool operator==(const BulkSpec&) const = default;
};

void to_json(nlohmann::json& j, const BulkSpec& b);
void from_json(const nlohmann::json& j, BulkSpec& b);

/// Logical edge-qubit basis (left, right) in the order used for every
/// two-qubit edge matrix: |up,up>, |down,down>, |up,down>, |down,up>.
inline constexpr std::array<std::array<int, 2>, 4> kEdgeBasis = {{{0, 0}, {1, 1}, {0, 1}, {1, 0}}};

/// Initial state: logical two-qubit state on the edges, sites 2 and N-1 in
/// |+>, product bulk on 3..N-2.
struct LogicalPrep {
  Eigen::Vector4cd edge = Eigen::Vector4cd::Unit(0);  // amplitudes on kEdgeBasis
  BulkSpec bulk;

  static LogicalPrep product(const Qubit& left, const Qubit& right, BulkSpec bulk = {});
  static LogicalPrep two_qubit(const Eigen::Vector4cd& edge, BulkSpec bulk = {});

  /// True when edge factorizes into left x right.
  bool is_product(double tol = 1e-12) const;
};

StateVector prepare_state(const LogicalPrep& prep, int n_sites);

}  // namespace sptmem
