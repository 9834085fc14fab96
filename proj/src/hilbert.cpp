#include "amp/hilbert.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "amp/errors.hpp"

namespace amp {
namespace {

constexpr cplx kI{0.0, 1.0};

double sum_norm2(std::span<const cplx> v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return s;
}

bool all_equal(const std::vector<double>& v, double tol) {
  if (v.empty()) return true;
  const double ref = v.front();
  return std::all_of(v.begin(), v.end(), [&](double c) {
    return std::abs(c - ref) <= tol * std::max(1.0, std::abs(ref));
  });
}

bool any_nonzero(const std::vector<double>& v) {
  return std::any_of(v.begin(), v.end(), [](double c) { return c != 0.0; });
}

void check_register(int n) {
  if (n < 1 || n > 30) throw InvalidInput(fmt::format("full register of {} spins not supported", n));
}

}  // namespace

StateVector StateVector::zeros(int n) {
  check_register(n);
  return StateVector{n, std::vector<cplx>(std::size_t{1} << n)};
}

StateVector StateVector::basis(int n, std::uint64_t index) {
  auto s = zeros(n);
  if (index >= s.dim()) throw InvalidInput("basis index out of range");
  s.amp[index] = 1.0;
  return s;
}

StateVector StateVector::uniform(int n) {
  auto s = zeros(n);
  const double a = 1.0 / std::sqrt(static_cast<double>(s.dim()));
  std::fill(s.amp.begin(), s.amp.end(), cplx{a, 0.0});
  return s;
}

double StateVector::norm() const { return std::sqrt(sum_norm2(amp)); }

SymmetricState SymmetricState::zeros(int n) {
  if (n < 1) throw InvalidInput("symmetric state needs n >= 1");
  return SymmetricState{n, std::vector<cplx>(n + 1)};
}

SymmetricState SymmetricState::sector(int n, int k) {
  auto s = zeros(n);
  if (k < 0 || k > n) throw InvalidInput("sector out of range");
  s.amp[k] = 1.0;
  return s;
}

SymmetricState SymmetricState::uniform(int n) {
  auto s = zeros(n);
  const double total = std::ldexp(1.0, n);
  for (int k = 0; k <= n; ++k) s.amp[k] = std::sqrt(binomial(n, k) / total);
  return s;
}

double SymmetricState::norm() const { return std::sqrt(sum_norm2(amp)); }

std::size_t pair_index(int n, int i, int j) {
  if (i == j || i < 0 || j < 0 || i >= n || j >= n)
    throw InvalidInput(fmt::format("invalid pair ({}, {}) for {} spins", i, j, n));
  if (i > j) std::swap(i, j);
  // Rows 0..i-1 hold (n-1) + (n-2) + ... + (n-i) entries.
  return static_cast<std::size_t>(i) * (2 * n - i - 1) / 2 + (j - i - 1);
}

bool HamiltonianTerms::has_y() const { return any_nonzero(y); }
bool HamiltonianTerms::has_xx() const { return any_nonzero(xx); }

bool HamiltonianTerms::is_symmetric(double tol) const {
  return all_equal(x, tol) && all_equal(y, tol) && all_equal(xx, tol);
}

HamiltonianTerms HamiltonianTerms::combine(double a, const HamiltonianTerms& lhs, double b,
                                           const HamiltonianTerms& rhs) {
  if (lhs.n != rhs.n) throw InvalidInput("cannot combine term sets of different size");
  auto mix = [&](const std::vector<double>& u, const std::vector<double>& v) {
    std::vector<double> out(std::max(u.size(), v.size()), 0.0);
    for (std::size_t i = 0; i < u.size(); ++i) out[i] += a * u[i];
    for (std::size_t i = 0; i < v.size(); ++i) out[i] += b * v[i];
    return out;
  };
  HamiltonianTerms t(lhs.n);
  t.diag_scale = a * lhs.diag_scale + b * rhs.diag_scale;
  t.x = mix(lhs.x, rhs.x);
  t.y = mix(lhs.y, rhs.y);
  t.xx = mix(lhs.xx, rhs.xx);
  return t;
}

void apply_hamiltonian(const HamiltonianTerms& terms, std::span<const double> sector_energy,
                       std::span<const cplx> psi, std::span<cplx> out) {
  const int n = terms.n;
  const std::size_t dim = std::size_t{1} << n;
  if (psi.size() != dim || out.size() != dim || sector_energy.size() != static_cast<std::size_t>(n + 1))
    throw InvalidInput("apply_hamiltonian: dimension mismatch");
  if (terms.x.size() != static_cast<std::size_t>(n) ||
      (!terms.y.empty() && terms.y.size() != static_cast<std::size_t>(n)) ||
      (!terms.xx.empty() && terms.xx.size() != pair_count(n)))
    throw InvalidInput("apply_hamiltonian: coefficient arrays do not match spin count");

  const double ds = terms.diag_scale;
  for (std::size_t i = 0; i < dim; ++i)
    out[i] = ds * sector_energy[std::popcount(i)] * psi[i];

  const bool with_y = !terms.y.empty();
  for (int b = 0; b < n; ++b) {
    const double xb = terms.x[b];
    const double yb = with_y ? terms.y[b] : 0.0;
    if (xb == 0.0 && yb == 0.0) continue;
    // lo has bit b clear, hi has it set. Y|0> = i|1>, Y|1> = -i|0>.
    const cplx up = xb + kI * yb;
    const cplx down = xb - kI * yb;
    const std::size_t mask = std::size_t{1} << b;
    if (yb == 0.0) {
      for (std::size_t base = 0; base < dim; base += 2 * mask) {
        for (std::size_t lo = base; lo < base + mask; ++lo) {
          out[lo] += xb * psi[lo | mask];
          out[lo | mask] += xb * psi[lo];
        }
      }
      continue;
    }
    for (std::size_t base = 0; base < dim; base += 2 * mask) {
      for (std::size_t lo = base; lo < base + mask; ++lo) {
        const std::size_t hi = lo | mask;
        out[lo] += down * psi[hi];
        out[hi] += up * psi[lo];
      }
    }
  }

  if (!terms.xx.empty()) {
    std::size_t p = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j, ++p) {
        const double c = terms.xx[p];
        if (c == 0.0) continue;
        const std::size_t mask = (std::size_t{1} << i) | (std::size_t{1} << j);
        for (std::size_t k = 0; k < dim; ++k) out[k] += c * psi[k ^ mask];
      }
    }
  }
}

StateVector apply_hamiltonian(const HamiltonianTerms& terms, const StateVector& psi,
                              const AmpParams& params) {
  if (terms.n != psi.n || params.n != psi.n) throw InvalidInput("apply_hamiltonian: spin count mismatch");
  auto out = StateVector::zeros(psi.n);
  const auto f = sector_energies(params);
  apply_hamiltonian(terms, f, psi.amp, out.amp);
  return out;
}

Eigen::MatrixXcd symmetric_matrix(const HamiltonianTerms& terms, const AmpParams& params) {
  if (!terms.is_symmetric())
    throw ContractViolation("term set is not permutation symmetric; use the full register");
  const int n = terms.n;
  if (params.n != n) throw InvalidInput("symmetric_matrix: spin count mismatch");
  const int d = n + 1;

  // Sum_i sigma^x_i between Dicke states: <k+1|X|k> = sqrt((N-k)(k+1)).
  Eigen::MatrixXd sx = Eigen::MatrixXd::Zero(d, d);
  for (int k = 0; k < n; ++k) {
    const double e = std::sqrt(static_cast<double>(n - k) * (k + 1));
    sx(k + 1, k) = e;
    sx(k, k + 1) = e;
  }

  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(d, d);
  for (int k = 0; k <= n; ++k) h(k, k) = terms.diag_scale * sector_energy(params, k);
  const double xc = terms.x.empty() ? 0.0 : terms.x.front();
  const double yc = terms.y.empty() ? 0.0 : terms.y.front();
  const double cc = terms.xx.empty() ? 0.0 : terms.xx.front();
  h += xc * sx.cast<cplx>();
  if (yc != 0.0) {
    for (int k = 0; k < n; ++k) {
      h(k + 1, k) += kI * yc * sx(k + 1, k);
      h(k, k + 1) -= kI * yc * sx(k, k + 1);
    }
  }
  if (cc != 0.0) {
    // sum_{i<j} X_i X_j = ((sum X)^2 - N) / 2
    Eigen::MatrixXd pairs = (sx * sx - n * Eigen::MatrixXd::Identity(d, d)) * 0.5;
    h += cc * pairs.cast<cplx>();
  }
  return h;
}

SymmetricState apply_symmetric(const HamiltonianTerms& terms, const SymmetricState& phi,
                               const AmpParams& params) {
  if (terms.n != phi.n) throw InvalidInput("apply_symmetric: spin count mismatch");
  const Eigen::MatrixXcd h = symmetric_matrix(terms, params);
  Eigen::Map<const Eigen::VectorXcd> in(phi.amp.data(), phi.dim());
  auto out = SymmetricState::zeros(phi.n);
  Eigen::Map<Eigen::VectorXcd>(out.amp.data(), out.dim()) = h * in;
  return out;
}

StateVector embed(const SymmetricState& phi) {
  auto psi = StateVector::zeros(phi.n);
  std::vector<double> w(phi.n + 1);
  for (int k = 0; k <= phi.n; ++k) w[k] = 1.0 / std::sqrt(binomial(phi.n, k));
  for (std::size_t i = 0; i < psi.dim(); ++i) {
    const int k = std::popcount(i);
    psi.amp[i] = phi.amp[k] * w[k];
  }
  return psi;
}

SymmetricState project(const StateVector& psi) {
  auto phi = SymmetricState::zeros(psi.n);
  for (std::size_t i = 0; i < psi.dim(); ++i) phi.amp[std::popcount(i)] += psi.amp[i];
  for (int k = 0; k <= psi.n; ++k) phi.amp[k] /= std::sqrt(binomial(psi.n, k));
  return phi;
}

void write_state_csv(std::ostream& os, std::span<const cplx> amp) {
  os << "basis_index,re,im\n";
  for (std::size_t i = 0; i < amp.size(); ++i)
    os << fmt::format("{},{:.17g},{:.17g}\n", i, amp[i].real(), amp[i].imag());
}

}  // namespace amp
