#include "sptmem/infometrics.hpp"

#include <cmath>

#include <fmt/format.h>

#include "sptmem/errors.hpp"

namespace sptmem {

namespace {

constexpr double kHermiticityTol = 1e-8;

void require_hermitian(const Eigen::MatrixXcd& m, const char* what) {
  if (m.rows() != m.cols()) throw ContractViolation(fmt::format("{}: matrix not square", what));
  const double err = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (err > kHermiticityTol) {
    throw ContractViolation(fmt::format("{}: matrix not Hermitian (error {:.3e})", what, err));
  }
}

Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& m) {
  const Eigen::MatrixXcd h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double entropy_term(double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; }

}  // namespace

double trace_distance(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) {
    throw ContractViolation("trace_distance: dimension mismatch");
  }
  require_hermitian(rho, "trace_distance");
  require_hermitian(sigma, "trace_distance");
  return 0.5 * hermitian_eigenvalues(rho - sigma).cwiseAbs().sum();
}

double trace_distance(const EdgeState& rho, const EdgeState& sigma) {
  return trace_distance(Eigen::MatrixXcd(rho.rho), Eigen::MatrixXcd(sigma.rho));
}

double distinguish_probability(double d) {
  if (!(d >= 0.0 && d <= 1.0)) {
    throw ContractViolation(fmt::format("trace distance {} outside [0, 1]", d));
  }
  return 0.5 + 0.5 * d;
}

double classical_capacity_lower(double p) {
  if (!(p >= 0.5 && p <= 1.0)) {
    throw ContractViolation(fmt::format("success probability {} outside [1/2, 1]", p));
  }
  return 1.0 - entropy_term(p) - entropy_term(1.0 - p);
}

double von_neumann_entropy(const Eigen::MatrixXcd& rho) {
  require_hermitian(rho, "von_neumann_entropy");
  const Eigen::VectorXd ev = hermitian_eigenvalues(rho);
  double s = 0.0;
  for (double l : ev) {
    if (l < kEigenvalueFloor) {
      throw ContractViolation(fmt::format("density matrix eigenvalue {:.3e} below {:.0e}", l,
                                          kEigenvalueFloor));
    }
    s += entropy_term(std::max(l, 0.0));
  }
  return s;
}

std::string to_string(EncodingPair p) {
  return p == EncodingPair::both_edges ? "both-edges" : "left-edge";
}

EncodingPair parse_encoding_pair(const std::string& s) {
  if (s == "both-edges") return EncodingPair::both_edges;
  if (s == "left-edge") return EncodingPair::left_edge;
  throw ConfigError(fmt::format("unknown encoding pair '{}'", s));
}

DirectedEncoding directed_encoding(Axis axis, EncodingPair pair) {
  Qubit pos, neg;
  switch (axis) {
    case Axis::x: pos = qubits::plus(); neg = qubits::minus(); break;
    case Axis::y: pos = qubits::plus_i(); neg = qubits::minus_i(); break;
    case Axis::z: pos = qubits::up(); neg = qubits::down(); break;
  }
  DirectedEncoding e;
  e.axis = axis;
  e.psi = LogicalPrep::product(pos, pos).edge;
  e.phi = pair == EncodingPair::both_edges ? LogicalPrep::product(neg, neg).edge
                                           : LogicalPrep::product(neg, pos).edge;
  return e;
}

double directed_integrity(const EdgeState& out_psi, const EdgeState& out_phi) {
  if (out_psi.t != out_phi.t) {
    throw ContractViolation(fmt::format("directed_integrity: outputs from different times ({} vs {})",
                                        out_psi.t, out_phi.t));
  }
  return trace_distance(out_psi, out_phi);
}

std::array<double, 3> directed_integrities(const ChannelMatrix& ch, EncodingPair pair) {
  std::array<double, 3> out{};
  for (Axis a : {Axis::x, Axis::y, Axis::z}) {
    const auto enc = directed_encoding(a, pair);
    EdgeState s_psi{ch.t, ch.apply(projector(enc.psi))};
    EdgeState s_phi{ch.t, ch.apply(projector(enc.phi))};
    s_psi.rho = 0.5 * (s_psi.rho + s_psi.rho.adjoint()).eval();
    s_phi.rho = 0.5 * (s_phi.rho + s_phi.rho.adjoint()).eval();
    out[static_cast<std::size_t>(a)] = directed_integrity(s_psi, s_phi);
  }
  return out;
}

double coherent_information(const ChannelMatrix& ch) {
  Matrix4c out = ch.apply(Matrix4c::Identity() * 0.25);
  out = 0.5 * (out + out.adjoint()).eval();
  const ChoiState choi = channel_to_choi(ch);
  const Matrix16c joint = 0.5 * (choi.rho + choi.rho.adjoint());
  return von_neumann_entropy(out) - von_neumann_entropy(joint);
}

RecoveryStats recovery_fraction(const std::vector<std::vector<double>>& traces, double tau,
                                const std::vector<double>& t_grid, std::string quantity_name) {
  RecoveryStats r;
  r.quantity_name = std::move(quantity_name);
  r.threshold = tau;
  r.times = t_grid;
  if (traces.empty()) throw ContractViolation("recovery fraction of an empty ensemble");
  r.n_total = static_cast<int>(traces.size());
  for (std::size_t k = 1; k < t_grid.size(); ++k) {
    if (!(t_grid[k] > t_grid[k - 1])) throw ContractViolation("time grid not strictly increasing");
  }
  std::vector<int> alive(t_grid.size(), 0);
  for (const auto& trace : traces) {
    if (trace.size() != t_grid.size()) {
      throw ContractViolation(fmt::format("trace of length {} on a grid of {} times", trace.size(),
                                          t_grid.size()));
    }
    std::optional<double> crossing;
    for (std::size_t k = 0; k < trace.size(); ++k) {
      if (!(trace[k] > tau)) {
        crossing = t_grid[k];
        break;
      }
      ++alive[k];
    }
    r.first_crossing.push_back(crossing);
  }
  r.fraction.reserve(t_grid.size());
  for (int a : alive) {
    r.fraction.push_back(static_cast<double>(a) / r.n_total);
  }
  return r;
}

}  // namespace sptmem
