#include "sptmem/tomography.hpp"

#include <cmath>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "sptmem/errors.hpp"

namespace sptmem {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

constexpr std::array<std::array<int, 2>, 6> kPairs = {{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

inline Eigen::Index vec_index(int a, int b) { return 4 * a + b; }

}  // namespace

Matrix4c ChannelMatrix::apply(const Matrix4c& rho) const {
  Vector16c v;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) v[vec_index(a, b)] = rho(a, b);
  }
  const Vector16c out = m * v;
  Matrix4c r;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) r(a, b) = out[vec_index(a, b)];
  }
  return r;
}

ChannelMatrix ChannelMatrix::identity(double t) { return ChannelMatrix{t, Matrix16c::Identity()}; }

const std::array<Eigen::Matrix2cd, 4>& pauli_matrices() {
  static const std::array<Eigen::Matrix2cd, 4> kPaulis = [] {
    std::array<Eigen::Matrix2cd, 4> p;
    const cplx i(0.0, 1.0);
    p[0] << 1, 0, 0, 1;
    p[1] << 0, 1, 1, 0;
    p[2] << 0, -i, i, 0;
    p[3] << 1, 0, 0, -1;
    return p;
  }();
  return kPaulis;
}

Matrix4c edge_pauli(int i, int j) {
  const auto& s = pauli_matrices();
  Matrix4c out;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      out(a, b) = s[static_cast<std::size_t>(i)](kEdgeBasis[a][0], kEdgeBasis[b][0]) *
                  s[static_cast<std::size_t>(j)](kEdgeBasis[a][1], kEdgeBasis[b][1]);
    }
  }
  return out;
}

Eigen::Vector4cd vec_to_edge(const Eigen::Vector4cd& tensor_order) {
  Eigen::Vector4cd out;
  for (int b = 0; b < 4; ++b) out[b] = tensor_order[2 * kEdgeBasis[b][0] + kEdgeBasis[b][1]];
  return out;
}

Matrix4c projector(const Eigen::Vector4cd& psi) { return psi * psi.adjoint(); }

EdgeState reconstruct_edge_state(const EdgeExpectations& e, double t) {
  if (std::abs(e[0] - 1.0) > 1e-8) {
    throw NormalizationError(fmt::format("identity expectation {} is not 1 at t = {}", e[0], t));
  }
  Matrix4c rho = Matrix4c::Zero();
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) rho += e[static_cast<std::size_t>(4 * i + j)] * edge_pauli(i, j);
  }
  rho *= 0.25;
  EdgeState s;
  s.t = t;
  s.rho = 0.5 * (rho + rho.adjoint());
  s.symmetrization_correction = (rho - s.rho).norm();
  return s;
}

EdgeExpectations edge_expectations(const Matrix4c& rho) {
  EdgeExpectations e{};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      e[static_cast<std::size_t>(4 * i + j)] = (rho * edge_pauli(i, j)).trace().real();
    }
  }
  return e;
}

EdgeExpectations measure_edge_expectations(const StateVector& v) {
  const auto ops = edge_operators(v.n_sites());
  EdgeExpectations e{};
  e[0] = v.amplitudes().squaredNorm();
  for (int i = 0; i < 3; ++i) {
    e[static_cast<std::size_t>(4 * (i + 1))] = expectation(ops.left[static_cast<std::size_t>(i)], v);
    e[static_cast<std::size_t>(i + 1)] = expectation(ops.right[static_cast<std::size_t>(i)], v);
  }
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      e[static_cast<std::size_t>(4 * (i + 1) + j + 1)] =
          expectation(ops.left[static_cast<std::size_t>(i)] * ops.right[static_cast<std::size_t>(j)], v);
    }
  }
  return e;
}

std::vector<TomographyInput> input_set(const BulkSpec& bulk) {
  std::vector<TomographyInput> inputs;
  static const char* kNames[4] = {"uu", "dd", "ud", "du"};
  for (int m = 0; m < 4; ++m) {
    inputs.push_back({kNames[m], LogicalPrep::two_qubit(Eigen::Vector4cd::Unit(m), bulk)});
  }
  const cplx i(0.0, 1.0);
  for (const auto& [m, n] : kPairs) {
    Eigen::Vector4cd plus = Eigen::Vector4cd::Zero();
    plus[m] = kInvSqrt2;
    plus[n] = kInvSqrt2;
    Eigen::Vector4cd minus = Eigen::Vector4cd::Zero();
    minus[m] = kInvSqrt2;
    minus[n] = i * kInvSqrt2;
    inputs.push_back({fmt::format("+{}{}", kNames[m], kNames[n]), LogicalPrep::two_qubit(plus, bulk)});
    inputs.push_back({fmt::format("-{}{}", kNames[m], kNames[n]), LogicalPrep::two_qubit(minus, bulk)});
  }
  return inputs;
}

InputSetResult run_input_set(const WeightedPauliSum& h, const BulkSpec& bulk,
                             const IntegratorConfig& cfg, const SamplingSchedule& schedule) {
  const auto inputs = input_set(bulk);
  InputSetResult result;
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    const StateVector v0 = prepare_state(inputs[k].prep, h.n_sites());
    evolve(h, v0, cfg, schedule, [&](std::size_t sample, double t, const StateVector& v) {
      if (k == 0) {
        result.times.push_back(t);
        result.edge_states.emplace_back();
      }
      result.edge_states[sample][k] = reconstruct_edge_state(measure_edge_expectations(v), t);
    });
  }
  return result;
}

ChannelMatrix assemble_channel(std::span<const EdgeState, 16> outputs) {
  const double t = outputs[0].t;
  for (const auto& s : outputs) {
    if (s.t != t) {
      throw ContractViolation(
          fmt::format("assemble_channel: inconsistent timestamps ({} vs {})", s.t, t));
    }
  }
  std::array<Matrix4c, 16> images;  // images[4m + n] = E(|m><n|)
  for (int m = 0; m < 4; ++m) images[static_cast<std::size_t>(5 * m)] = outputs[static_cast<std::size_t>(m)].rho;
  const cplx i(0.0, 1.0);
  const cplx half_1pi = 0.5 * cplx(1.0, 1.0);
  for (std::size_t p = 0; p < kPairs.size(); ++p) {
    const auto [m, n] = kPairs[p];
    const Matrix4c& e_plus = outputs[4 + 2 * p].rho;
    const Matrix4c& e_minus = outputs[5 + 2 * p].rho;
    const Matrix4c& e_mm = images[static_cast<std::size_t>(5 * m)];
    const Matrix4c& e_nn = images[static_cast<std::size_t>(5 * n)];
    const Matrix4c e_mn = e_plus + i * e_minus - half_1pi * (e_nn + e_mm);
    images[static_cast<std::size_t>(4 * m + n)] = e_mn;
    images[static_cast<std::size_t>(4 * n + m)] = e_mn.adjoint();
  }
  ChannelMatrix ch;
  ch.t = t;
  for (int m = 0; m < 4; ++m) {
    for (int n = 0; n < 4; ++n) {
      const Matrix4c& img = images[static_cast<std::size_t>(4 * m + n)];
      for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) ch.m(vec_index(a, b), vec_index(m, n)) = img(a, b);
      }
    }
  }
  return ch;
}

ChoiState channel_to_choi(const ChannelMatrix& ch) {
  ChoiState c;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      for (int m = 0; m < 4; ++m) {
        for (int n = 0; n < 4; ++n) {
          c.rho(vec_index(a, m), vec_index(b, n)) = 0.25 * ch.m(vec_index(a, b), vec_index(m, n));
        }
      }
    }
  }
  const cplx tr = c.rho.trace();
  if (std::abs(tr) > 0.0) c.rho /= tr;
  return c;
}

bool CptpReport::passed() const {
  return tp_error <= tolerance && choi_hermiticity_error <= tolerance &&
         choi_min_eigenvalue >= -tolerance;
}

CptpReport validate_cptp(const ChannelMatrix& ch, double tol) {
  CptpReport r;
  r.tolerance = tol;
  for (int m = 0; m < 4; ++m) {
    for (int n = 0; n < 4; ++n) {
      cplx tr = 0.0;
      for (int a = 0; a < 4; ++a) tr += ch.m(vec_index(a, a), vec_index(m, n));
      r.tp_error = std::max(r.tp_error, std::abs(tr - (m == n ? 1.0 : 0.0)));
    }
  }
  // Unnormalized Choi so that a trace defect is not hidden by rescaling.
  Matrix16c choi;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      for (int m = 0; m < 4; ++m) {
        for (int n = 0; n < 4; ++n) {
          choi(vec_index(a, m), vec_index(b, n)) = 0.25 * ch.m(vec_index(a, b), vec_index(m, n));
        }
      }
    }
  }
  r.choi_hermiticity_error = (choi - choi.adjoint()).cwiseAbs().maxCoeff();
  const Matrix16c herm = 0.5 * (choi + choi.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix16c> es(herm, Eigen::EigenvaluesOnly);
  r.choi_min_eigenvalue = es.eigenvalues().minCoeff();
  return r;
}

nlohmann::json matrix_to_json(const Matrix16c& m) {
  nlohmann::json arr = nlohmann::json::array();
  for (int r = 0; r < 16; ++r) {
    for (int c = 0; c < 16; ++c) arr.push_back({m(r, c).real(), m(r, c).imag()});
  }
  return arr;
}

nlohmann::json conventions_json() {
  return {
      {"site_order", "site 1 is the most significant bit of a basis index"},
      {"single_site_basis", {"up", "down"}},
      {"edge_basis", {"up,up", "down,down", "up,down", "down,up"}},
      {"vectorization", "row-major: vec(A)[4a+b] = A[a][b]; column 4m+n of the channel is E(|m><n|)"},
      {"choi", "row 4a+m, column 4b+n = E(|m><n|)[a][b] / 4 (output index a, reference index m)"},
      {"logical_encoding", "site 2 and site N-1 prepared in |+>; O^z = logical Z"},
      {"matrix_layout", "row-major array of [re, im] pairs"},
  };
}

}  // namespace sptmem
