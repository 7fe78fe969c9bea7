#include "sptmem/oracles.hpp"

#include <string>

#include <fmt/format.h>

#include "sptmem/errors.hpp"

namespace sptmem::oracle {

namespace {

Eigen::Matrix2cd single(char c) {
  const cplx i(0.0, 1.0);
  Eigen::Matrix2cd m;
  switch (c) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, -i, i, 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    case 'H': m << 1, 1, 1, -1; m *= 0.70710678118654752440; break;
    default: throw ContractViolation(fmt::format("unknown single-site gate '{}'", c));
  }
  return m;
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
      out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
    }
  }
  return out;
}

Eigen::MatrixXcd identity(Eigen::Index dim) { return Eigen::MatrixXcd::Identity(dim, dim); }

cplx complex_gauss(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double re = gauss(rng);
  const double im = gauss(rng);
  return {re, im};
}

}  // namespace

Eigen::MatrixXcd dense_word(std::string_view word) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
  for (char c : word) out = kron(out, single(c));
  return out;
}

Eigen::MatrixXcd dense_hamiltonian(int n_sites, double J, const std::vector<double>& h) {
  const Eigen::Index dim = Eigen::Index{1} << n_sites;
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(dim, dim);
  for (int j = 2; j <= n_sites - 1; ++j) {
    std::string w(static_cast<std::size_t>(n_sites), 'I');
    w[static_cast<std::size_t>(j - 2)] = 'X';
    w[static_cast<std::size_t>(j - 1)] = 'Z';
    w[static_cast<std::size_t>(j)] = 'X';
    H -= (1.0 + h[static_cast<std::size_t>(j - 2)]) * dense_word(w);
  }
  for (int j = 1; j <= n_sites - 1; ++j) {
    std::string w(static_cast<std::size_t>(n_sites), 'I');
    w[static_cast<std::size_t>(j - 1)] = 'Z';
    w[static_cast<std::size_t>(j)] = 'Z';
    H -= J * dense_word(w);
  }
  return H;
}

Eigen::VectorXcd dense_propagate(const Eigen::MatrixXcd& h, const Eigen::VectorXcd& psi, double t) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  const Eigen::MatrixXcd& v = es.eigenvectors();
  Eigen::VectorXcd c = v.adjoint() * psi;
  for (Eigen::Index k = 0; k < c.size(); ++k) {
    c[k] *= std::exp(cplx(0.0, -t * es.eigenvalues()[k]));
  }
  return v * c;
}

Matrix4c disentangled_edge_state(const Eigen::VectorXcd& psi, int n_sites) {
  const int n = n_sites;
  const Eigen::Index rest = Eigen::Index{1} << (n - 2);
  // CNOT with control on the second factor, target on the first.
  Eigen::Matrix4cd cnot_21;
  cnot_21 << 1, 0, 0, 0,
             0, 0, 0, 1,
             0, 0, 1, 0,
             0, 1, 0, 0;
  // CNOT with control on the first factor, target on the second.
  Eigen::Matrix4cd cnot_12;
  cnot_12 << 1, 0, 0, 0,
             0, 1, 0, 0,
             0, 0, 0, 1,
             0, 0, 1, 0;
  std::string h_word(static_cast<std::size_t>(n), 'I');
  h_word[1] = 'H';
  h_word[static_cast<std::size_t>(n - 2)] = 'H';
  const Eigen::MatrixXcd left = kron(cnot_21, identity(rest));
  const Eigen::MatrixXcd right = kron(identity(rest), cnot_12);
  const Eigen::VectorXcd phi = right * (left * (dense_word(h_word) * psi));

  // Partial trace over sites 2..N-1; index = s1 * 2^{N-1} + mid * 2 + sN.
  const Eigen::Index mid_dim = Eigen::Index{1} << (n - 2);
  Eigen::Matrix4cd rho_tensor = Eigen::Matrix4cd::Zero();  // index 2*s1 + sN
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      cplx acc = 0.0;
      for (Eigen::Index m = 0; m < mid_dim; ++m) {
        const Eigen::Index ia = (Eigen::Index{a >> 1} << (n - 1)) | (m << 1) | (a & 1);
        const Eigen::Index ib = (Eigen::Index{b >> 1} << (n - 1)) | (m << 1) | (b & 1);
        acc += phi[ia] * std::conj(phi[ib]);
      }
      rho_tensor(a, b) = acc;
    }
  }
  Matrix4c out;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      out(a, b) = rho_tensor(2 * kEdgeBasis[a][0] + kEdgeBasis[a][1],
                             2 * kEdgeBasis[b][0] + kEdgeBasis[b][1]);
    }
  }
  return out;
}

Matrix16c unitary_superoperator(const Matrix4c& u) { return kraus_superoperator({u}); }

Matrix16c kraus_superoperator(const std::vector<Matrix4c>& kraus) {
  Matrix16c s = Matrix16c::Zero();
  for (const auto& k : kraus) {
    s += Matrix16c(kron(k, k.conjugate()));
  }
  return s;
}

Matrix16c kraus_choi(const std::vector<Matrix4c>& kraus) {
  Matrix16c c = Matrix16c::Zero();
  for (const auto& k : kraus) {
    Vector16c v;
    for (int a = 0; a < 4; ++a) {
      for (int m = 0; m < 4; ++m) v[4 * a + m] = 0.5 * k(a, m);
    }
    c += v * v.adjoint();
  }
  return c;
}

Eigen::VectorXcd random_state(Eigen::Index dim, std::mt19937_64& rng) {
  Eigen::VectorXcd v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v[i] = complex_gauss(rng);
  return v.normalized();
}

Eigen::MatrixXcd random_unitary(Eigen::Index dim, std::mt19937_64& rng) {
  Eigen::MatrixXcd g(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) g(r, c) = complex_gauss(rng);
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < dim; ++k) q.col(k) *= r(k, k) / std::abs(r(k, k));
  return q;
}

Eigen::MatrixXcd random_density_matrix(Eigen::Index dim, std::mt19937_64& rng) {
  Eigen::MatrixXcd g(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) g(r, c) = complex_gauss(rng);
  }
  Eigen::MatrixXcd rho = g * g.adjoint();
  return rho / rho.trace();
}

std::vector<Matrix4c> random_kraus(int n_kraus, std::mt19937_64& rng) {
  // Columns 0..3 of a random unitary on C^{4 n_kraus} form an isometry.
  const Eigen::MatrixXcd u = random_unitary(4 * n_kraus, rng);
  std::vector<Matrix4c> out;
  for (int k = 0; k < n_kraus; ++k) out.push_back(u.block(4 * k, 0, 4, 4));
  return out;
}

}  // namespace sptmem::oracle
