#include "amp/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "amp/errors.hpp"
#include "amp/parallel.hpp"

namespace amp {
namespace {

Eigen::MatrixXcd full_matrix(const HamiltonianTerms& terms, std::span<const double> f, std::size_t dim) {
  Eigen::MatrixXcd h(dim, dim);
  std::vector<cplx> e(dim), col(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    std::fill(e.begin(), e.end(), cplx{0.0, 0.0});
    e[j] = 1.0;
    apply_hamiltonian(terms, f, e, col);
    for (std::size_t i = 0; i < dim; ++i) h(i, j) = col[i];
  }
  return h;
}

Representation pick(const DriveScheme& scheme, const SpectrumOptions& opts) {
  if (opts.representation != Representation::Auto) return opts.representation;
  return is_symmetric_scheme(scheme) ? Representation::Symmetric : Representation::Full;
}

double golden_minimize(const std::function<double(double)>& g, double lo, double hi, double tol, double& best_value) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double gc = g(c), gd = g(d);
  while (b - a > tol * std::max(1e-3, std::abs(0.5 * (a + b)))) {
    if (gc < gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - inv_phi * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + inv_phi * (b - a);
      gd = g(d);
    }
  }
  if (gc < gd) {
    best_value = gc;
    return c;
  }
  best_value = gd;
  return d;
}

std::vector<double> uniform_grid(int resolution) {
  if (resolution < 3) throw InvalidInput("gap grid needs at least 3 points");
  std::vector<double> s(resolution);
  for (int i = 0; i < resolution; ++i) s[i] = static_cast<double>(i) / (resolution - 1);
  return s;
}

}  // namespace

InstantSpectrum spectrum_of_terms(const HamiltonianTerms& terms, const AmpParams& params, int count,
                                  bool want_vectors, const SpectrumOptions& opts) {
  Representation rep = opts.representation;
  if (rep == Representation::Auto) rep = terms.is_symmetric() ? Representation::Symmetric : Representation::Full;

  InstantSpectrum out;
  out.representation = rep;
  EigenPairs pairs;
  if (rep == Representation::Symmetric) {
    pairs = dense_lowest(symmetric_matrix(terms, params), std::min(count, params.n + 1), want_vectors);
  } else {
    if (params.n > opts.full_space_cap)
      throw InvalidInput(fmt::format("full register of {} spins exceeds the cap of {}", params.n, opts.full_space_cap));
    const auto f = sector_energies(params);
    const std::size_t dim = std::size_t{1} << params.n;
    if (dim <= static_cast<std::size_t>(opts.dense_limit)) {
      pairs = dense_lowest(full_matrix(terms, f, dim), count, want_vectors);
    } else {
      MatVec mv = [&](std::span<const cplx> in, std::span<cplx> o) { apply_hamiltonian(terms, f, in, o); };
      pairs = lanczos_lowest(mv, dim, count, want_vectors, opts.lanczos);
    }
  }
  out.energies = std::move(pairs.values);
  out.vectors = std::move(pairs.vectors);
  return out;
}

InstantSpectrum instantaneous_spectrum(const DriveScheme& scheme, const AmpParams& params, double s, double t,
                                       int count, bool want_vectors, const SpectrumOptions& opts) {
  SpectrumOptions o = opts;
  o.representation = pick(scheme, opts);
  const auto terms = terms_at(scheme, params, s, t);
  try {
    return spectrum_of_terms(terms, params, count, want_vectors, o);
  } catch (const EigenSolveError& e) {
    throw EigenSolveError(fmt::format("{} at s = {}", e.what(), s), s);
  }
}

GapProfile gap_profile(const DriveScheme& scheme, const AmpParams& params, const GapOptions& opts) {
  params.validate();
  GapProfile out;
  out.s_grid = uniform_grid(opts.resolution);
  out.gaps.resize(out.s_grid.size());
  auto gap_at = [&](double s) {
    const auto sp = instantaneous_spectrum(scheme, params, s, opts.t, 2, false, opts.spectrum);
    return sp.energies[1] - sp.energies[0];
  };
  parallel_for(out.s_grid.size(), [&](std::size_t i) { out.gaps[i] = gap_at(out.s_grid[i]); });

  const auto it = std::min_element(out.gaps.begin(), out.gaps.end());
  const std::size_t i = static_cast<std::size_t>(it - out.gaps.begin());
  const double lo = out.s_grid[i == 0 ? 0 : i - 1];
  const double hi = out.s_grid[std::min(i + 1, out.s_grid.size() - 1)];
  double best = *it;
  double s_best = golden_minimize(gap_at, lo, hi, opts.s_tol, best);
  if (*it <= best) {
    best = *it;
    s_best = out.s_grid[i];
  }
  out.s_min = s_best;
  out.delta_min = best;
  return out;
}

LevelDiagram level_diagram(const DriveScheme& scheme, const AmpParams& params, int levels, const GapOptions& opts) {
  params.validate();
  if (levels < 1) throw InvalidInput("level diagram needs at least one excited level");
  LevelDiagram out;
  out.s_grid = uniform_grid(opts.resolution);
  out.differences.resize(out.s_grid.size());
  parallel_for(out.s_grid.size(), [&](std::size_t i) {
    const auto sp = instantaneous_spectrum(scheme, params, out.s_grid[i], opts.t, levels + 1, false, opts.spectrum);
    std::vector<double> d;
    for (std::size_t k = 1; k < sp.energies.size(); ++k) d.push_back(sp.energies[k] - sp.energies[0]);
    out.differences[i] = std::move(d);
  });
  return out;
}

std::vector<std::size_t> local_minima(const std::vector<double>& v) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    // Plateaus count once, at their left edge.
    if (!(v[i] < v[i - 1])) continue;
    std::size_t j = i;
    while (j + 1 < v.size() && v[j + 1] == v[i]) ++j;
    if (j + 1 < v.size() && v[j + 1] > v[i]) idx.push_back(i);
  }
  return idx;
}

OverlapTrace overlap_trace(const DriveScheme& scheme, const AmpParams& params, const std::vector<double>& s_grid,
                           double t, const SpectrumOptions& opts) {
  params.validate();
  OverlapTrace out;
  out.s_grid = s_grid;
  const std::size_t m = s_grid.size();
  out.ground_up.resize(m);
  out.ground_down.resize(m);
  out.excited_up.resize(m);
  out.excited_down.resize(m);
  parallel_for(m, [&](std::size_t i) {
    const auto sp = instantaneous_spectrum(scheme, params, s_grid[i], t, 2, true, opts);
    const auto& g = sp.vectors[0];
    const auto& e = sp.vectors[1];
    // Dicke |N> and |0> coincide with all-up and all-down.
    const std::size_t up = g.size() - 1;
    out.ground_up[i] = std::norm(g[up]);
    out.ground_down[i] = std::norm(g[0]);
    out.excited_up[i] = std::norm(e[up]);
    out.excited_down[i] = std::norm(e[0]);
  });
  return out;
}

// ---------------------------------------------------------------------------

double critical_kappa(const AmpParams& p, CorrectionOrder order) {
  p.validate();
  // Per-spin flip energies out of each well: 1/x_p (false) and (1+A)/(1-x_p) (true).
  const double h_false = 0.5 / p.xp;
  const double h_true = 0.5 * (1.0 + p.a) / (1.0 - p.xp);
  auto well_false = [&](double k) {
    if (order == CorrectionOrder::SecondOrder) return -k * k * p.xp;
    return h_false - std::hypot(h_false, k);
  };
  auto well_true = [&](double k) {
    if (order == CorrectionOrder::SecondOrder) return -p.a - k * k * (1.0 - p.xp) / (1.0 + p.a);
    return -p.a + h_true - std::hypot(h_true, k);
  };
  auto diff = [&](double k) { return well_false(k) - well_true(k); };

  double lo = 0.0, hi = 100.0;
  if (diff(hi) > 0.0)
    throw InvalidInput(fmt::format(
        "no well crossing for kappa in (0, {}]: false-well energy {:.6g}, true-well energy {:.6g} (per spin)", hi,
        well_false(hi), well_true(hi)));
  while (hi - lo > 1e-13 * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    (diff(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double flip_denominator(const AmpParams& p, double k, int n) {
  if (n <= p.xp * p.n + 1e-12) return n * (1.0 / p.xp + 2.0 * k * k * p.xp);
  return (p.n - n) * ((1.0 + p.a) / (1.0 - p.xp) + 2.0 * k * k * (1.0 - p.xp) / (1.0 + p.a));
}

double forward_gap(const AmpParams& p, double kappa_c, bool corrected) {
  p.validate();
  if (!(kappa_c > 0.0)) throw InvalidInput("critical field must be positive");
  // Accumulate in logs: N! and kappa^N overflow long before the ratio does.
  double log_gap = std::lgamma(p.n + 1.0) + p.n * std::log(kappa_c);
  for (int n = 1; n < p.n; ++n) {
    const double u = flip_denominator(p, kappa_c, n);
    if (!(u > 0.0)) throw InvalidInput(fmt::format("degenerate energy denominator U_{} = {}", n, u));
    log_gap -= std::log(u);
  }
  double gap = std::exp(log_gap);
  if (corrected) gap *= 2.0 * std::numbers::pi / p.n;
  return gap;
}

double forward_gap_sweep_units(const AmpParams& p, double kappa_c, bool corrected) {
  return forward_gap(p, kappa_c, corrected) * s_from_field(kappa_c);
}

double multiphoton_rate(double omega0, double w, double lambda, int n) {
  if (lambda < 0.0 || !(w > 0.0)) throw InvalidInput("multiphoton rate needs lambda >= 0 and w > 0");
  return omega0 * omega0 / w * std::pow(1.0 + 2.0 * lambda * lambda, n);
}

double multiphoton_rate_sum(double omega0, double w, double lambda, int n) {
  if (lambda < 0.0 || !(w > 0.0)) throw InvalidInput("multiphoton rate needs lambda >= 0 and w > 0");
  double sum = 0.0;
  for (int l = 0; l <= n; ++l) sum += std::pow(lambda, 2.0 * l) * binomial(n, l) * std::ldexp(1.0, l);
  return omega0 * omega0 / w * sum;
}

}  // namespace amp
