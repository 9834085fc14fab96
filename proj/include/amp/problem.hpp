#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace amp {

/// One instance of the asymmetric magnetization problem.
///
/// The classical energy depends only on the fraction m of up spins. It rises
/// linearly from 0 at m = 0 to 1 at m = xp and then falls linearly to -a at
/// m = 1, so all-down is a false minimum and all-up the unique ground state.
struct AmpParams {
  int n = 0;       ///< spin count, >= 2
  double a = 0.0;  ///< asymmetry f(0) - f(1), > 0
  double xp = 0.0; ///< peak location, 0.5 < xp < 1

  /// Throws InvalidInput when any invariant fails.
  void validate() const;
};

/// A named (a, xp) pair; the spin count is supplied per run.
struct ParamSet {
  std::string name;
  double a = 0.0;
  double xp = 0.0;

  AmpParams with_n(int n) const { return AmpParams{n, a, xp}; }
};

/// Ordered list of parameter sets, hardest first.
struct DifficultyEnsemble {
  std::vector<ParamSet> sets;

  /// The four sets {0.2, 0.8}, {0.28, 0.7}, {0.3, 0.64}, {0.34, 0.59}
  /// named hardest, hard, moderate, easiest.
  static DifficultyEnsemble standard();

  /// Looks a set up by name or by 0-based / 1-based index ("0", "set1").
  const ParamSet& find(const std::string& key) const;
};

/// f(m) for m on the grid {0, 1/N, ..., 1}. At m == xp the falling branch
/// applies. Throws InvalidInput for off-grid or out-of-range m.
double classical_energy(const AmpParams& params, double m);

/// f(k/N) for an integer up-spin count k; no grid check needed.
double sector_energy(const AmpParams& params, int k);

/// f(k/N) for k = 0..N.
std::vector<double> sector_energies(const AmpParams& params);

/// Fraction of up spins. A bit value of 1 is sigma^z = +1.
double magnetization(std::span<const std::uint8_t> bits);

/// Same, for basis index `index` of an n-spin register (bit b is spin b).
double magnetization(std::uint64_t index, int n);

/// Weight C(N,k)/2^N of each magnetization k/N, indexed by k.
std::vector<double> density_of_states(int n);

/// C(n, k) as a double; exact for n <= 60.
double binomial(int n, int k);

}  // namespace amp
