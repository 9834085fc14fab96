#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "amp/drives.hpp"
#include "amp/spectrum.hpp"

namespace amp {

enum class Integrator {
  /// Fourth-order commutator-free Magnus: two exponentials per step, each of
  /// a Hamiltonian sampled at the Gauss-Legendre nodes. Exponentials are
  /// exact in the Dicke basis and Krylov-converged on the full register.
  Magnus4,
  /// Classical RK4; not norm preserving, kept as an independent check.
  Rk4,
};

/// t_f = c N^p.
struct RuntimePolynomial {
  double c = 4.0;
  double p = 2.0;
  double operator()(int n) const;
};

struct EvolutionConfig {
  double t_f = -1.0;  ///< total time; negative means use `runtime`
  RuntimePolynomial runtime;
  double max_dt = 1.0;
  int steps_per_period = 40;  ///< minimum steps per period of the fastest drive frequency
  double norm_tol = 1e-9;
  Integrator integrator = Integrator::Magnus4;
  double krylov_tol = 1e-12;
  bool renormalize = false;
  Representation representation = Representation::Auto;
  int full_space_cap = 20;

  double resolved_tf(int n) const { return t_f >= 0.0 ? t_f : runtime(n); }
};

struct FinalState {
  Representation representation = Representation::Full;
  std::optional<StateVector> full;
  std::optional<SymmetricState> symmetric;
  double t_f = 0.0;
  long steps = 0;
  double norm_drift = 0.0;  ///< | ||psi(t_f)|| - 1 |

  double success_probability() const;
};

/// Solves i d psi/dt = H(s(t), t) psi from t = 0 to t_f. The initial state is
/// the uniform superposition, or all-down for ReverseAnneal. Throws
/// NormDriftError if the norm leaves 1 by more than norm_tol.
FinalState integrate(const DriveScheme& scheme, const AmpParams& params, const EvolutionConfig& config);

/// Step count integrate() will use for this scheme and t_f.
long step_count(const DriveScheme& scheme, double t_f, const EvolutionConfig& config);

/// |<all-up|psi>|^2
double success_probability(const StateVector& psi);
double success_probability(const SymmetricState& phi);

/// t_f ln(0.01) / ln(1 - p); t_f at p = 1 and +infinity for p <= 0.
double tts(double t_f, double p_success);

struct TtsRecord {
  std::string set;
  int n = 0;
  SchemeKind kind = SchemeKind::Uniform;
  double t_f = 0.0;
  double p_success = 0.0;  ///< mean over draws
  double p_stderr = 0.0;
  double tts = 0.0;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> draw_seeds;
  std::vector<double> draw_p;
  nlohmann::json family;                    ///< resolved options of the scheme family
  std::vector<nlohmann::json> draw_schemes; ///< full serialization of every draw

  nlohmann::json to_json() const;
};

/// Options a family of sampled schemes resolves to at size n.
nlohmann::json family_json(SchemeKind kind, int n, const SchemeOptions& opts);

/// Mean success probability over `draws` independently sampled schemes,
/// converted to a time to solution. Deterministic kinds run once.
TtsRecord averaged_tts(SchemeKind kind, const AmpParams& params, const EvolutionConfig& config, int draws,
                       std::uint64_t seed, const SchemeOptions& opts = {});

}  // namespace amp
