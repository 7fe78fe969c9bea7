#include "sptmem/model.hpp"

#include <cmath>
#include <random>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "sptmem/errors.hpp"

namespace sptmem {

void ModelParams::validate() const {
  if (n_sites < 5 || n_sites > kMaxSites) {
    throw ConfigError(fmt::format("n_sites must be in [5, {}], got {}", kMaxSites, n_sites));
  }
  if (!(delta >= 0.0)) throw ConfigError("delta must be >= 0");
  if (!std::isfinite(J)) throw ConfigError("J must be finite");
}

double DisorderRealization::at(int site) const {
  if (site < 2 || site > n_sites() - 1) {
    throw ContractViolation(fmt::format("no disorder coupling at site {}", site));
  }
  return h[static_cast<std::size_t>(site - 2)];
}

void to_json(nlohmann::json& j, const DisorderRealization& d) {
  j = nlohmann::json{{"realization_index", d.realization_index},
                     {"derived_seed", d.derived_seed},
                     {"h", d.h}};
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t realization_index) {
  // splitmix64 finalizer applied twice over the combined key.
  auto mix = [](std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  };
  return mix(mix(master_seed) ^ realization_index);
}

DisorderRealization sample_disorder(const ModelParams& params, int realization_index) {
  params.validate();
  DisorderRealization d;
  d.realization_index = realization_index;
  d.derived_seed = derive_seed(params.master_seed, static_cast<std::uint64_t>(realization_index));
  std::mt19937_64 engine(d.derived_seed);
  d.h.reserve(static_cast<std::size_t>(params.n_sites - 2));
  for (int j = 2; j <= params.n_sites - 1; ++j) {
    const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53;
    d.h.push_back(params.delta * (u - 0.5));
  }
  return d;
}

WeightedPauliSum build_hamiltonian(const ModelParams& params, const DisorderRealization& dis) {
  const int n = params.n_sites;
  if (dis.n_sites() != n) {
    throw ContractViolation(
        fmt::format("disorder realization has {} sites, model has {}", dis.n_sites(), n));
  }
  WeightedPauliSum h(n);
  for (int j = 2; j <= n - 1; ++j) {
    const auto word = PauliString::x(n, j - 1) * PauliString::z(n, j) * PauliString::x(n, j + 1);
    h.add(-(1.0 + dis.at(j)), word);
  }
  if (params.J != 0.0) {
    for (int j = 1; j <= n - 1; ++j) {
      h.add(-params.J, PauliString::z(n, j) * PauliString::z(n, j + 1));
    }
  }
  return h;
}

char axis_name(Axis a) {
  switch (a) {
    case Axis::x: return 'X';
    case Axis::y: return 'Y';
    case Axis::z: return 'Z';
  }
  return '?';
}

const PauliString& EdgeOperatorSet::get(Edge e, Axis a) const {
  return (e == Edge::left ? left : right)[static_cast<std::size_t>(a)];
}

std::array<PauliString, 6> EdgeOperatorSet::all() const {
  return {left[0], left[1], left[2], right[0], right[1], right[2]};
}

EdgeOperatorSet edge_operators(int n_sites) {
  if (n_sites < 4) throw ContractViolation("edge operators need at least 4 sites");
  const int n = n_sites;
  EdgeOperatorSet ops;
  ops.left = {PauliString::x(n, 1),
              PauliString::y(n, 1) * PauliString::x(n, 2),
              PauliString::z(n, 1) * PauliString::x(n, 2)};
  ops.right = {PauliString::x(n, n),
               PauliString::x(n, n - 1) * PauliString::y(n, n),
               PauliString::x(n, n - 1) * PauliString::z(n, n)};
  return ops;
}

bool CommutationReport::all_commute() const {
  for (double b : commutator_bound) {
    if (b != 0.0) return false;
  }
  return true;
}

CommutationReport check_edge_commutation(const WeightedPauliSum& h, const EdgeOperatorSet& ops) {
  CommutationReport r;
  const auto all = ops.all();
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (const auto& t : h.terms()) {
      if (t.coefficient != 0.0 && !t.op.commutes_with(all[i])) {
        r.commutator_bound[i] += 2.0 * std::abs(t.coefficient);
        ++r.anticommuting_terms[i];
      }
    }
  }
  return r;
}

TimeReversalReport check_time_reversal(const WeightedPauliSum& h) {
  TimeReversalReport r;
  for (std::size_t k = 0; k < h.terms().size(); ++k) {
    const auto& op = h.terms()[k].op;
    if (op.y_count() % 2 != 0) {
      r.real_terms = false;
      r.non_real.push_back(k);
    }
    if (op.x_weight() % 2 != 0) {
      r.commutes_with_parity = false;
      r.parity_odd.push_back(k);
    }
  }
  return r;
}

namespace qubits {
namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
}
Qubit up() { return {1.0, 0.0}; }
Qubit down() { return {0.0, 1.0}; }
Qubit plus() { return {kInvSqrt2, kInvSqrt2}; }
Qubit minus() { return {kInvSqrt2, -kInvSqrt2}; }
Qubit plus_i() { return {kInvSqrt2, cplx(0.0, kInvSqrt2)}; }
Qubit minus_i() { return {kInvSqrt2, cplx(0.0, -kInvSqrt2)}; }
}  // namespace qubits

std::string BulkSpec::name() const {
  switch (kind) {
    case Kind::all_up: return "all-up";
    case Kind::all_plus: return "all-plus";
    case Kind::fixed_product: return "fixed-product";
  }
  return "?";
}

BulkSpec BulkSpec::parse(const std::string& name) {
  if (name == "all-up") return {Kind::all_up, {}};
  if (name == "all-plus") return {Kind::all_plus, {}};
  throw ConfigError(fmt::format("unknown bulk_spec '{}' (expected all-up, all-plus or a "
                                "fixed-product site list)",
                                name));
}

void to_json(nlohmann::json& j, const BulkSpec& b) {
  if (b.kind != BulkSpec::Kind::fixed_product) {
    j = b.name();
    return;
  }
  j = nlohmann::json::array();
  for (const auto& q : b.sites) {
    j.push_back({{q[0].real(), q[0].imag()}, {q[1].real(), q[1].imag()}});
  }
}

void from_json(const nlohmann::json& j, BulkSpec& b) {
  if (j.is_string()) {
    b = BulkSpec::parse(j.get<std::string>());
    return;
  }
  if (!j.is_array()) throw ConfigError("bulk_spec must be a name or a list of site states");
  b.kind = BulkSpec::Kind::fixed_product;
  b.sites.clear();
  for (const auto& s : j) {
    if (!s.is_array() || s.size() != 2) {
      throw ConfigError("fixed-product site state must be [[re, im], [re, im]]");
    }
    b.sites.push_back({cplx(s[0].at(0).get<double>(), s[0].at(1).get<double>()),
                       cplx(s[1].at(0).get<double>(), s[1].at(1).get<double>())});
  }
}

LogicalPrep LogicalPrep::product(const Qubit& left, const Qubit& right, BulkSpec bulk) {
  LogicalPrep p;
  for (std::size_t b = 0; b < 4; ++b) {
    p.edge[static_cast<Eigen::Index>(b)] = left[kEdgeBasis[b][0]] * right[kEdgeBasis[b][1]];
  }
  p.bulk = std::move(bulk);
  return p;
}

LogicalPrep LogicalPrep::two_qubit(const Eigen::Vector4cd& edge, BulkSpec bulk) {
  LogicalPrep p;
  p.edge = edge;
  p.bulk = std::move(bulk);
  return p;
}

bool LogicalPrep::is_product(double tol) const {
  // 2x2 coefficient matrix psi[l][r] factorizes iff its determinant vanishes.
  cplx psi[2][2];
  for (std::size_t b = 0; b < 4; ++b) psi[kEdgeBasis[b][0]][kEdgeBasis[b][1]] = edge[static_cast<Eigen::Index>(b)];
  return std::abs(psi[0][0] * psi[1][1] - psi[0][1] * psi[1][0]) <= tol;
}

StateVector prepare_state(const LogicalPrep& prep, int n_sites) {
  if (n_sites < 5 || n_sites > kMaxSites) {
    throw ContractViolation(fmt::format("prepare_state needs 5..{} sites, got {}", kMaxSites, n_sites));
  }
  if (std::abs(prep.edge.norm() - 1.0) > 1e-10) {
    throw NormalizationError(fmt::format("logical edge state has norm {}", prep.edge.norm()));
  }
  const int n_bulk = n_sites - 4;
  std::vector<Qubit> bulk;
  switch (prep.bulk.kind) {
    case BulkSpec::Kind::all_up: bulk.assign(static_cast<std::size_t>(n_bulk), qubits::up()); break;
    case BulkSpec::Kind::all_plus: bulk.assign(static_cast<std::size_t>(n_bulk), qubits::plus()); break;
    case BulkSpec::Kind::fixed_product:
      if (static_cast<int>(prep.bulk.sites.size()) != n_bulk) {
        throw ContractViolation(fmt::format("fixed-product bulk has {} sites, chain needs {}",
                                            prep.bulk.sites.size(), n_bulk));
      }
      bulk = prep.bulk.sites;
      for (const auto& q : bulk) {
        if (std::abs(std::norm(q[0]) + std::norm(q[1]) - 1.0) > 1e-10) {
          throw NormalizationError("fixed-product bulk site state not normalized");
        }
      }
      break;
  }
  // Middle block: |+>_2 (x) bulk (x) |+>_{N-1}, sites 2..N-1.
  std::vector<Qubit> middle;
  middle.push_back(qubits::plus());
  middle.insert(middle.end(), bulk.begin(), bulk.end());
  middle.push_back(qubits::plus());
  const StateVector mid = StateVector::product(middle);

  const std::uint64_t mid_dim = mid.dim();
  const int shift = n_sites - 1;  // site 1 bit
  Amplitudes amps = Amplitudes::Zero(Eigen::Index{1} << n_sites);
  for (std::size_t b = 0; b < 4; ++b) {
    const cplx e = prep.edge[static_cast<Eigen::Index>(b)];
    if (e == 0.0) continue;
    const std::uint64_t sl = static_cast<std::uint64_t>(kEdgeBasis[b][0]);
    const std::uint64_t sr = static_cast<std::uint64_t>(kEdgeBasis[b][1]);
    for (std::uint64_t m = 0; m < mid_dim; ++m) {
      const std::uint64_t idx = (sl << shift) | (m << 1) | sr;
      amps[static_cast<Eigen::Index>(idx)] += e * mid[m];
    }
  }
  return StateVector(n_sites, std::move(amps));
}

}  // namespace sptmem
