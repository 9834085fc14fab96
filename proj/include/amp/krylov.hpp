#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "amp/hilbert.hpp"

namespace amp {

/// out = H in, for a Hermitian H.
using MatVec = std::function<void(std::span<const cplx>, std::span<cplx>)>;

struct EigenPairs {
  std::vector<double> values;              ///< ascending
  std::vector<std::vector<cplx>> vectors;  ///< empty unless requested
};

struct LanczosOptions {
  int max_iter = 300;       ///< Krylov dimension cap per round
  double tol = 1e-10;       ///< residual tolerance, relative to max(1, |theta|)
  std::uint64_t seed = 7;   ///< start-vector seed; results do not depend on it beyond tolerance
  int max_rounds = 64;      ///< deflation rounds for degenerate levels
};

/// Lowest `count` eigenpairs of a Hermitian operator of dimension `dim`.
///
/// Runs Lanczos with full reorthogonalization. A single Krylov space sees only
/// one vector of each degenerate eigenspace, so further rounds restart in the
/// orthogonal complement of what was found until no new level falls below
/// the current count-th value. Throws EigenSolveError (with s = NaN) when a
/// round fails to converge.
EigenPairs lanczos_lowest(const MatVec& h, std::size_t dim, int count, bool want_vectors,
                          const LanczosOptions& opts = {});

/// Dense Hermitian solve, for small problems and as a cross-check.
EigenPairs dense_lowest(const Eigen::MatrixXcd& h, int count, bool want_vectors);

/// Reusable storage for krylov_expm.
struct KrylovWorkspace {
  std::vector<std::vector<cplx>> basis;
  std::vector<cplx> w;
};

struct KrylovStats {
  int dimension = 0;
  int substeps = 1;
};

/// psi <- exp(-i dt H) psi via a Lanczos subspace. The subspace grows until
/// the standard a-posteriori error estimate drops below `tol`; if `max_dim`
/// is reached first the step is split in halves.
KrylovStats krylov_expm(const MatVec& h, std::span<cplx> psi, double dt, KrylovWorkspace& ws,
                        double tol = 1e-12, int max_dim = 40);

}  // namespace amp
