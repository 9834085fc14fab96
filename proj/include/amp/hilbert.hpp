#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "amp/problem.hpp"

namespace amp {

using cplx = std::complex<double>;

/// Amplitudes over the 2^N sigma^z product basis.
///
/// Little-endian: bit b of the basis index is spin b, and a set bit means the
/// spin points up. Index 0 is all-down, index 2^N - 1 is all-up.
struct StateVector {
  int n = 0;
  std::vector<cplx> amp;

  static StateVector zeros(int n);
  static StateVector basis(int n, std::uint64_t index);
  static StateVector uniform(int n);

  std::size_t dim() const { return amp.size(); }
  double norm() const;
};

/// Amplitudes over the N+1 Dicke states |k>, the normalized uniform
/// superposition of all bitstrings with k up spins.
struct SymmetricState {
  int n = 0;
  std::vector<cplx> amp;

  static SymmetricState zeros(int n);
  static SymmetricState sector(int n, int k);
  /// Ground state of -sum sigma^x, i.e. the uniform superposition.
  static SymmetricState uniform(int n);

  std::size_t dim() const { return amp.size(); }
  double norm() const;
};

/// Index of the unordered pair (i, j), i != j, in the upper-triangular
/// row-major layout used for two-body coefficients.
std::size_t pair_index(int n, int i, int j);
inline std::size_t pair_count(int n) { return static_cast<std::size_t>(n) * (n - 1) / 2; }

/// Real coefficients of
///   H = diag_scale * f(m) + sum_i x_i X_i + sum_i y_i Y_i + sum_{i<j} c_ij X_i X_j.
/// Empty y or xx vectors mean "all zero".
struct HamiltonianTerms {
  int n = 0;
  double diag_scale = 0.0;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> xx;

  explicit HamiltonianTerms(int n_spins = 0) : n(n_spins), x(n_spins, 0.0) {}

  bool has_y() const;
  bool has_xx() const;
  /// True when every x, every y and every pair coupling is the same value.
  bool is_symmetric(double tol = 1e-14) const;

  double& coupling(int i, int j) { return xx.at(pair_index(n, i, j)); }

  /// Coefficient-wise a*lhs + b*rhs. Both must share n.
  static HamiltonianTerms combine(double a, const HamiltonianTerms& lhs, double b,
                                  const HamiltonianTerms& rhs);
};

/// Out-of-place H|psi> on the full register. `out` must have psi's size.
/// Never forms the matrix; cost is O((N + pairs) 2^N).
void apply_hamiltonian(const HamiltonianTerms& terms, std::span<const double> sector_energy,
                       std::span<const cplx> psi, std::span<cplx> out);

StateVector apply_hamiltonian(const HamiltonianTerms& terms, const StateVector& psi,
                              const AmpParams& params);

/// H|phi> in the Dicke basis. Throws ContractViolation unless terms.is_symmetric().
SymmetricState apply_symmetric(const HamiltonianTerms& terms, const SymmetricState& phi,
                               const AmpParams& params);

/// Dense Hermitian matrix of a symmetric term set in the Dicke basis.
Eigen::MatrixXcd symmetric_matrix(const HamiltonianTerms& terms, const AmpParams& params);

/// Distributes each sector amplitude as amp/sqrt(C(N,k)) over its bitstrings.
StateVector embed(const SymmetricState& phi);
/// Adjoint of embed; project(embed(phi)) == phi.
SymmetricState project(const StateVector& psi);

/// CSV dump: basis_index,re,im.
void write_state_csv(std::ostream& os, std::span<const cplx> amp);

}  // namespace amp
