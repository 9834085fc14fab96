#pragma once

// Reference implementations for tests: dense Kronecker-product Hamiltonians
// and brute-force enumeration. Slow and simple on purpose.

#include <random>
#include <vector>

#include <Eigen/Dense>

#include "amp/hilbert.hpp"

namespace amp::test {

inline Eigen::MatrixXcd single_site(const Eigen::Matrix2cd& op, int site, int n) {
  // Bit b of the basis index is spin b, so spin 0 is the rightmost Kronecker factor.
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
  for (int b = n - 1; b >= 0; --b) {
    const Eigen::Matrix2cd f = b == site ? op : Eigen::Matrix2cd::Identity();
    Eigen::MatrixXcd next(out.rows() * 2, out.cols() * 2);
    for (Eigen::Index i = 0; i < out.rows(); ++i)
      for (Eigen::Index j = 0; j < out.cols(); ++j) next.block(2 * i, 2 * j, 2, 2) = out(i, j) * f;
    out = next;
  }
  return out;
}

inline Eigen::Matrix2cd pauli_x() {
  Eigen::Matrix2cd m;
  m << 0, 1, 1, 0;
  return m;
}

// Columns are |0> = down, |1> = up; Y|0> = i|1>.
inline Eigen::Matrix2cd pauli_y() {
  Eigen::Matrix2cd m;
  m << 0, cplx(0, -1), cplx(0, 1), 0;
  return m;
}

inline Eigen::MatrixXcd dense_hamiltonian(const HamiltonianTerms& t, const AmpParams& p) {
  const int n = t.n;
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    int k = 0;
    for (int b = 0; b < n; ++b) k += (i >> b) & 1;
    h(i, i) = t.diag_scale * sector_energy(p, k);
  }
  for (int b = 0; b < n; ++b) {
    h += t.x[b] * single_site(pauli_x(), b, n);
    if (!t.y.empty()) h += t.y[b] * single_site(pauli_y(), b, n);
  }
  if (!t.xx.empty())
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        h += t.xx[pair_index(n, i, j)] * single_site(pauli_x(), i, n) * single_site(pauli_x(), j, n);
  return h;
}

inline HamiltonianTerms random_terms(int n, std::mt19937_64& rng, bool with_y = true, bool with_xx = true) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  HamiltonianTerms t(n);
  t.diag_scale = u(rng);
  for (auto& v : t.x) v = u(rng);
  if (with_y) {
    t.y.resize(n);
    for (auto& v : t.y) v = u(rng);
  }
  if (with_xx) {
    t.xx.resize(pair_count(n));
    for (auto& v : t.xx) v = u(rng);
  }
  return t;
}

inline std::vector<cplx> random_vector(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<cplx> v(dim);
  double nrm = 0.0;
  for (auto& z : v) {
    z = {g(rng), g(rng)};
    nrm += std::norm(z);
  }
  for (auto& z : v) z /= std::sqrt(nrm);
  return v;
}

inline cplx inner(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

}  // namespace amp::test
