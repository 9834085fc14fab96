#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "amp/hilbert.hpp"
#include "amp/problem.hpp"

namespace amp {

// ---------------------------------------------------------------------------
// Scheme descriptions. Every random quantity is sampled once at construction
// and stored, so a scheme value fully determines H(s, t).
// ---------------------------------------------------------------------------

/// -(1-s)/N sum X + s f(m)
struct Uniform {};

/// Per-site fields switched off one after another, last site first:
/// -(1/N) sum Gamma_i(s) X_i + s f(m). Gamma_i already carries the whole
/// schedule, there is no extra (1-s) factor.
struct Inhomogeneous {
  double r = 1.0;  ///< ramp exponent
};

enum class CouplerKind { Ferro, Antiferro, Mixed };

/// -(1-s)/N sum X + s(1-s)/N sum_{i<j} sign_ij X_i X_j + s f(m)
struct Couplers {
  CouplerKind kind = CouplerKind::Ferro;
  std::vector<int> signs;  ///< per pair, only for Mixed
};

/// Magnitude oscillation: x_i = -(1-s) kappa (1 + alpha_bar sin 2 pi f_i t)
struct RfqaM {
  double alpha_bar = 0.9;
  double kappa = 0.0;
  std::vector<double> freqs;
};

/// Direction oscillation in the x-y plane; keeps the instantaneous spectrum.
struct RfqaD {
  double alpha_bar = 0.9;
  double kappa = 0.0;
  std::vector<double> freqs;
};

/// RFQA-M where each group of sites shares one frequency.
struct SyncM {
  double alpha_bar = 0.9;
  double kappa = 0.0;
  std::vector<int> group_of_site;
  std::vector<double> group_freqs;
};

/// RFQA-M (or SyncM) plus oscillating couplers (1-s) kappa_r sin(2 pi r_ij t) X_i X_j.
struct RfqaMCouplers {
  std::variant<RfqaM, SyncM> base;
  double kappa_r = 0.0;
  std::vector<double> coupler_freqs;  ///< per pair
};

/// Start in the false minimum at s = 1, ramp down to s_pause, hold for
/// `dwell`, ramp back up. The drive is the uniform one at the current s.
struct ReverseAnneal {
  double s_pause = 0.75;
  double dwell = 0.0;
};

using DriveScheme =
    std::variant<Uniform, Inhomogeneous, Couplers, RfqaM, RfqaD, SyncM, RfqaMCouplers, ReverseAnneal>;

/// One column of the method comparison; selects how a scheme is sampled.
enum class SchemeKind {
  Uniform,
  Inhomogeneous,
  CouplerFerro,
  CouplerAntiferro,
  CouplerMixed,
  RfqaM,
  RfqaMCouplers,
  SyncM,
  SyncMCouplers,
  RfqaD,
  ReverseAnneal,
};

std::string to_string(SchemeKind kind);
/// Accepts the CLI names (uniform, inhomogeneous, ferro, antiferro, mixed,
/// rfqa-m, rfqa-mc, sync-m, sync-mc, rfqa-d, reverse) and the table labels
/// (S, I, C_F, C_A, C_M, M, CM, SyncM, SyncMC, D, R).
SchemeKind parse_scheme_kind(const std::string& name);
/// Short column label used in the summary table.
std::string table_label(SchemeKind kind);
std::vector<SchemeKind> all_scheme_kinds();
/// True when the kind draws random frequencies, signs or pause points.
bool is_randomized(SchemeKind kind);

struct FrequencyBand {
  double f_min = 0.0;
  double f_max = 0.0;
};

/// [0.01 / N^1.5, 0.02 / N^1.5]
FrequencyBand default_band(int n);

/// Knobs the sampled schemes depend on. Unset optionals take N-dependent
/// defaults: kappa = 1/N, kappa_r = 1/N^2, band = default_band(N).
struct SchemeOptions {
  double r = 1.0;
  double alpha_bar = 0.9;
  std::optional<double> kappa;
  std::optional<double> kappa_r;
  std::optional<FrequencyBand> band;
  int sync_groups = 2;
  double s_pause_min = 0.55;
  double s_pause_max = 0.95;
  double dwell_c = 2.0;  ///< dwell = dwell_c * N^2
};

/// Deterministic 64-bit stream derivation (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

/// |f_i| uniform in the band, sign uniform; identical output for identical seed.
std::vector<double> sample_frequencies(int n, std::uint64_t seed, FrequencyBand band);

/// Random +-1 per pair.
std::vector<int> sample_signs(int n, std::uint64_t seed);

/// Near-equal contiguous groups; group g holds sites [g*N/k, (g+1)*N/k).
std::vector<int> partition_sites(int n, int groups);

/// Builds a concrete scheme of the given kind; all sampling is driven by `seed`.
DriveScheme make_scheme(SchemeKind kind, int n, std::uint64_t seed, const SchemeOptions& opts = {});

/// Real coefficients of H(s, t). Throws InvalidInput for s outside [0, 1] or t < 0.
HamiltonianTerms terms_at(const DriveScheme& scheme, const AmpParams& params, double s, double t);

/// Lower edge s_i = ((N - i)/N)^(1/r) of site i's ramp (site indices 1..N);
/// s_0 = 1 and s_N = 0.
double shutdown_point(int n, int i, double r);

/// Field multiplier of site i (1..N): 1 before s_i, 0 after s_{i-1},
/// N(1 - s^r) + (1 - i) clamped to [0, 1] in between.
double gamma_i(const Inhomogeneous& scheme, int n, int i, double s);

/// Piecewise-linear 1 -> s_pause -> 1 with equal ramps of (total - dwell)/2.
double reverse_profile(const ReverseAnneal& scheme, double t, double total_time);

/// Annealing parameter at time t: t / t_f, or the reverse profile.
double schedule_s(const DriveScheme& scheme, double t, double total_time);

/// True for schemes whose terms are site-uniform at every (s, t).
bool is_symmetric_scheme(const DriveScheme& scheme);

/// Largest |frequency| present, 0 for static drives.
double fastest_frequency(const DriveScheme& scheme);

/// Short name of the concrete alternative ("uniform", "rfqa-m", ...).
std::string scheme_name(const DriveScheme& scheme);

nlohmann::json to_json(const DriveScheme& scheme);
DriveScheme scheme_from_json(const nlohmann::json& j);

}  // namespace amp
