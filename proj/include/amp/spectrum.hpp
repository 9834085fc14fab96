#pragma once

#include <vector>

#include "amp/drives.hpp"
#include "amp/krylov.hpp"

namespace amp {

enum class Representation { Auto, Symmetric, Full };

struct SpectrumOptions {
  Representation representation = Representation::Auto;
  int full_space_cap = 14;  ///< largest N diagonalized on the full register
  int dense_limit = 256;    ///< full-register dimension up to which a dense solve is used
  LanczosOptions lanczos;
};

struct InstantSpectrum {
  Representation representation = Representation::Full;
  std::vector<double> energies;
  std::vector<std::vector<cplx>> vectors;  ///< Dicke or full-register amplitudes
};

/// Lowest `count` levels of a fixed term set. Auto picks the Dicke basis for
/// symmetric terms, the full register otherwise.
InstantSpectrum spectrum_of_terms(const HamiltonianTerms& terms, const AmpParams& params, int count,
                                  bool want_vectors, const SpectrumOptions& opts = {});

/// Lowest levels of H(s, t) for a scheme; symmetric schemes use the Dicke basis.
InstantSpectrum instantaneous_spectrum(const DriveScheme& scheme, const AmpParams& params, double s, double t,
                                       int count, bool want_vectors, const SpectrumOptions& opts = {});

struct GapOptions {
  int resolution = 200;     ///< coarse grid points over [0, 1]
  double t = 0.0;           ///< physical time, for time-dependent drives
  double s_tol = 1e-8;      ///< relative tolerance of the refined minimizer
  SpectrumOptions spectrum;
};

/// E1 - E0 sampled on a uniform s grid, with the minimum refined by
/// golden-section search on the coarse minimizer +- one grid step.
struct GapProfile {
  std::vector<double> s_grid;
  std::vector<double> gaps;
  double s_min = 0.0;
  double delta_min = 0.0;
};

GapProfile gap_profile(const DriveScheme& scheme, const AmpParams& params, const GapOptions& opts = {});

/// E_k - E_0 for k = 1..levels at each grid point.
struct LevelDiagram {
  std::vector<double> s_grid;
  std::vector<std::vector<double>> differences;  ///< [grid point][k - 1]
};

LevelDiagram level_diagram(const DriveScheme& scheme, const AmpParams& params, int levels,
                           const GapOptions& opts = {});

/// Indices of interior local minima of a sampled curve.
std::vector<std::size_t> local_minima(const std::vector<double>& values);

/// Squared overlaps of the instantaneous ground and first excited states with
/// the classical all-up and all-down states.
struct OverlapTrace {
  std::vector<double> s_grid;
  std::vector<double> ground_up, ground_down, excited_up, excited_down;
};

OverlapTrace overlap_trace(const DriveScheme& scheme, const AmpParams& params, const std::vector<double>& s_grid,
                           double t = 0.0, const SpectrumOptions& opts = {});

// ---------------------------------------------------------------------------
// Perturbative gap prediction.
//
// Works in the frame H' = (N/s) H(s) = -kappa sum X + N f(m), kappa = (1-s)/s,
// where one flip out of the false well costs 1/x_p.
// ---------------------------------------------------------------------------

enum class CorrectionOrder {
  SecondOrder,  ///< single-spin corrections to O(kappa^2)
  Resummed,     ///< single-spin corrections to all orders (product-state energies)
};

/// Field strength at which the corrected energies of the two competing
/// classical ground states cross. Throws InvalidInput when no crossing exists
/// in (0, 100].
double critical_kappa(const AmpParams& params, CorrectionOrder order = CorrectionOrder::Resummed);

/// Energy cost U_n of the n-flip intermediate state, corrections included.
double flip_denominator(const AmpParams& params, double kappa_c, int n_flips);

/// N! kappa^N / prod_{n=1}^{N-1} U_n in the flip-energy frame, times 2 pi / N
/// when `corrected`.
double forward_gap(const AmpParams& params, double kappa_c, bool corrected);

/// forward_gap rescaled by s_c = 1/(1 + kappa_c) for comparison with gaps of
/// the sweep Hamiltonian.
double forward_gap_sweep_units(const AmpParams& params, double kappa_c, bool corrected);

inline double field_from_s(double s) { return (1.0 - s) / s; }
inline double s_from_field(double kappa) { return 1.0 / (1.0 + kappa); }

/// Closed form (omega0^2 / w) (1 + 2 lambda^2)^N.
double multiphoton_rate(double omega0, double w, double lambda, int n);
/// The same quantity as the explicit sum over l = 0..N of lambda^{2l} C(N,l) 2^l.
double multiphoton_rate_sum(double omega0, double w, double lambda, int n);

}  // namespace amp
