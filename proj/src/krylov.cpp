#include "amp/krylov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "amp/errors.hpp"

namespace amp {
namespace {

cplx dot(std::span<const cplx> a, std::span<const cplx> b) {
  cplx s{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

double norm(std::span<const cplx> a) {
  double s = 0.0;
  for (const auto& z : a) s += std::norm(z);
  return std::sqrt(s);
}

void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void scale(std::span<cplx> x, double f) {
  for (auto& z : x) z *= f;
}

// Two passes of classical Gram-Schmidt against every vector in `against`.
void orthogonalize(std::span<cplx> w, const std::vector<std::vector<cplx>>& against, std::size_t count) {
  for (int pass = 0; pass < 2; ++pass)
    for (std::size_t k = 0; k < count; ++k) axpy(-dot(against[k], w), against[k], w);
}

std::vector<cplx> random_vector(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<cplx> v(dim);
  for (auto& z : v) z = {g(rng), g(rng)};
  return v;
}

struct RoundResult {
  Eigen::VectorXd theta;
  Eigen::MatrixXd y;
  Eigen::VectorXd residual;
  std::vector<std::vector<cplx>> basis;
  bool exhausted = false;
};

// One Lanczos run from `start`, kept orthogonal to `locked`.
RoundResult lanczos_round(const MatVec& h, std::vector<cplx> start, const std::vector<std::vector<cplx>>& locked,
                          int want, const LanczosOptions& opts) {
  const std::size_t dim = start.size();
  RoundResult r;
  orthogonalize(start, locked, locked.size());
  double b0 = norm(start);
  if (b0 < 1e-12) {
    r.exhausted = true;
    return r;
  }
  scale(start, 1.0 / b0);
  r.basis.push_back(std::move(start));

  std::vector<double> alpha, beta;
  std::vector<cplx> w(dim);
  const int max_iter = static_cast<int>(std::min<std::size_t>(opts.max_iter, dim - locked.size()));

  auto solve = [&](int m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    Eigen::VectorXd d = Eigen::Map<Eigen::VectorXd>(alpha.data(), m);
    Eigen::VectorXd e = m > 1 ? Eigen::VectorXd(Eigen::Map<Eigen::VectorXd>(beta.data(), m - 1)) : Eigen::VectorXd();
    es.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
    r.theta = es.eigenvalues();
    r.y = es.eigenvectors();
  };

  for (int j = 0; j < max_iter; ++j) {
    h(r.basis[j], w);
    const double a = dot(r.basis[j], w).real();
    alpha.push_back(a);
    axpy(-a, r.basis[j], w);
    if (j > 0) axpy(-beta[j - 1], r.basis[j - 1], w);
    orthogonalize(w, locked, locked.size());
    orthogonalize(w, r.basis, r.basis.size());
    const double b = norm(w);

    const int m = j + 1;
    const bool last = (m == max_iter) || b < 1e-12 * std::max(1.0, std::abs(a));
    if (last || (m >= want && (m % 8 == 0))) {
      solve(m);
      r.residual = (b * r.y.row(m - 1)).cwiseAbs().transpose();
      if (last) {
        r.exhausted = b < 1e-12 * std::max(1.0, std::abs(a));
        if (r.exhausted) r.residual.setZero();
        return r;
      }
      bool done = m >= want;
      for (int i = 0; i < std::min(want, m) && done; ++i)
        done = r.residual[i] <= opts.tol * std::max(1.0, std::abs(r.theta[i]));
      if (done) return r;
    }
    beta.push_back(b);
    std::vector<cplx> next(w);
    scale(next, 1.0 / b);
    r.basis.push_back(std::move(next));
  }
  return r;
}

}  // namespace

EigenPairs lanczos_lowest(const MatVec& h, std::size_t dim, int count, bool want_vectors,
                          const LanczosOptions& opts) {
  if (count < 1 || static_cast<std::size_t>(count) > dim)
    throw InvalidInput(fmt::format("cannot extract {} eigenpairs from dimension {}", count, dim));
  std::mt19937_64 rng(opts.seed);
  std::vector<double> vals;
  std::vector<std::vector<cplx>> vecs;

  for (int round = 0; round < opts.max_rounds && vecs.size() < dim; ++round) {
    const int missing = std::max(1, count - static_cast<int>(vals.size()));
    RoundResult rr = lanczos_round(h, random_vector(dim, rng), vecs, missing, opts);
    if (rr.theta.size() == 0) break;

    // Current acceptance threshold: the count-th lowest value found so far.
    std::vector<double> sorted = vals;
    std::sort(sorted.begin(), sorted.end());
    const double threshold = sorted.size() >= static_cast<std::size_t>(count)
                                 ? sorted[count - 1]
                                 : std::numeric_limits<double>::infinity();

    int added = 0;
    for (Eigen::Index i = 0; i < rr.theta.size(); ++i) {
      const double th = rr.theta[i];
      const double tol = opts.tol * std::max(1.0, std::abs(th));
      if (rr.residual[i] > tol) continue;
      if (th > threshold + tol && static_cast<int>(vals.size()) >= count) continue;
      std::vector<cplx> v(dim, cplx{0.0, 0.0});
      for (std::size_t k = 0; k < rr.basis.size(); ++k) axpy(rr.y(k, i), rr.basis[k], v);
      orthogonalize(v, vecs, vecs.size());
      const double nv = norm(v);
      if (nv < 0.5) continue;
      scale(v, 1.0 / nv);
      vals.push_back(th);
      vecs.push_back(std::move(v));
      ++added;
    }
    if (added == 0) {
      if (static_cast<int>(vals.size()) >= count || rr.exhausted) break;
      throw EigenSolveError(fmt::format("Lanczos failed to converge within {} iterations", opts.max_iter),
                            std::numeric_limits<double>::quiet_NaN());
    }
  }
  if (static_cast<int>(vals.size()) < count)
    throw EigenSolveError("Lanczos did not resolve the requested number of levels",
                          std::numeric_limits<double>::quiet_NaN());

  std::vector<std::size_t> order(vals.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return vals[a] < vals[b]; });
  EigenPairs out;
  for (int i = 0; i < count; ++i) {
    out.values.push_back(vals[order[i]]);
    if (want_vectors) out.vectors.push_back(std::move(vecs[order[i]]));
  }
  return out;
}

EigenPairs dense_lowest(const Eigen::MatrixXcd& h, int count, bool want_vectors) {
  if (count < 1 || count > h.rows()) throw InvalidInput("dense_lowest: bad level count");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, want_vectors ? Eigen::ComputeEigenvectors
                                                                     : Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw EigenSolveError("dense eigensolver failed", std::numeric_limits<double>::quiet_NaN());
  EigenPairs out;
  for (int i = 0; i < count; ++i) {
    out.values.push_back(es.eigenvalues()[i]);
    if (want_vectors) {
      const auto col = es.eigenvectors().col(i);
      out.vectors.emplace_back(col.data(), col.data() + col.size());
    }
  }
  return out;
}

KrylovStats krylov_expm(const MatVec& h, std::span<cplx> psi, double dt, KrylovWorkspace& ws, double tol,
                        int max_dim) {
  const std::size_t dim = psi.size();
  const double beta0 = norm(psi);
  KrylovStats stats;
  if (beta0 == 0.0 || dt == 0.0) return stats;
  max_dim = static_cast<int>(std::min<std::size_t>(max_dim, dim));

  if (ws.basis.size() < static_cast<std::size_t>(max_dim) + 1) ws.basis.resize(max_dim + 1);
  for (auto& v : ws.basis) v.resize(dim);
  ws.w.resize(dim);

  for (std::size_t i = 0; i < dim; ++i) ws.basis[0][i] = psi[i] / beta0;
  std::vector<double> alpha, beta;
  Eigen::VectorXcd coeffs;
  int m = 0;
  bool converged = false;

  for (int j = 0; j < max_dim; ++j) {
    h(ws.basis[j], ws.w);
    const double a = dot(ws.basis[j], ws.w).real();
    alpha.push_back(a);
    axpy(-a, ws.basis[j], ws.w);
    if (j > 0) axpy(-beta[j - 1], ws.basis[j - 1], ws.w);
    orthogonalize(ws.w, ws.basis, j + 1);
    const double b = norm(ws.w);
    m = j + 1;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    Eigen::VectorXd d = Eigen::Map<Eigen::VectorXd>(alpha.data(), m);
    Eigen::VectorXd e = m > 1 ? Eigen::VectorXd(Eigen::Map<Eigen::VectorXd>(beta.data(), m - 1)) : Eigen::VectorXd();
    es.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
    const Eigen::MatrixXd& q = es.eigenvectors();
    Eigen::VectorXcd phase(m);
    for (int k = 0; k < m; ++k) phase[k] = std::exp(cplx{0.0, -dt * es.eigenvalues()[k]}) * q(0, k);
    coeffs = q.cast<cplx>() * phase;

    const double err = beta0 * b * std::abs(coeffs[m - 1]);
    if (b < 1e-14 || err < tol) {
      converged = true;
      break;
    }
    if (j + 1 < max_dim) {
      beta.push_back(b);
      for (std::size_t i = 0; i < dim; ++i) ws.basis[j + 1][i] = ws.w[i] / b;
    }
  }

  if (!converged) {
    // Step too large for the subspace cap: halve it.
    auto first = krylov_expm(h, psi, 0.5 * dt, ws, 0.5 * tol, max_dim);
    auto second = krylov_expm(h, psi, 0.5 * dt, ws, 0.5 * tol, max_dim);
    return {std::max(first.dimension, second.dimension), first.substeps + second.substeps};
  }

  std::fill(psi.begin(), psi.end(), cplx{0.0, 0.0});
  for (int k = 0; k < m; ++k) axpy(beta0 * coeffs[k], ws.basis[k], psi);
  stats.dimension = m;
  return stats;
}

}  // namespace amp
