#include "amp/problem.hpp"

#include <bit>
#include <cmath>
#include <fmt/format.h>

#include "amp/errors.hpp"

namespace amp {

void AmpParams::validate() const {
  if (n < 2) throw InvalidInput(fmt::format("spin count must be >= 2, got {}", n));
  if (!(a > 0.0) || !std::isfinite(a))
    throw InvalidInput(fmt::format("asymmetry A must be > 0, got {}", a));
  if (!(xp > 0.5 && xp < 1.0))
    throw InvalidInput(fmt::format("peak location x_p must lie in (0.5, 1), got {}", xp));
}

DifficultyEnsemble DifficultyEnsemble::standard() {
  return DifficultyEnsemble{{
      {"hardest", 0.2, 0.8},
      {"hard", 0.28, 0.7},
      {"moderate", 0.3, 0.64},
      {"easiest", 0.34, 0.59},
  }};
}

const ParamSet& DifficultyEnsemble::find(const std::string& key) const {
  for (const auto& s : sets)
    if (s.name == key) return s;
  std::string digits = key;
  bool one_based = false;
  if (digits.rfind("set", 0) == 0) {
    digits = digits.substr(3);
    one_based = true;
  }
  if (!digits.empty() && digits.find_first_not_of("0123456789") == std::string::npos) {
    int idx = std::stoi(digits) - (one_based ? 1 : 0);
    if (idx >= 0 && idx < static_cast<int>(sets.size())) return sets[idx];
  }
  throw InvalidInput(fmt::format("unknown parameter set '{}'", key));
}

double sector_energy(const AmpParams& p, int k) {
  const double x = static_cast<double>(k) / p.n;
  if (k < 0 || k > p.n) throw InvalidInput(fmt::format("sector {} outside [0, {}]", k, p.n));
  // Compare k against xp*N in integers where possible so that m == xp lands on
  // the falling branch even when xp*N is not exactly representable.
  if (x < p.xp && std::abs(x - p.xp) > 1e-12) return x / p.xp;
  return 1.0 - (1.0 + p.a) * (x - p.xp) / (1.0 - p.xp);
}

double classical_energy(const AmpParams& p, double m) {
  if (!(m >= 0.0 && m <= 1.0))
    throw InvalidInput(fmt::format("magnetization {} outside [0, 1]", m));
  const double scaled = m * p.n;
  const double k = std::round(scaled);
  if (std::abs(scaled - k) > 1e-9)
    throw InvalidInput(fmt::format("magnetization {} is not on the k/{} grid", m, p.n));
  return sector_energy(p, static_cast<int>(k));
}

std::vector<double> sector_energies(const AmpParams& p) {
  std::vector<double> f(p.n + 1);
  for (int k = 0; k <= p.n; ++k) f[k] = sector_energy(p, k);
  return f;
}

double magnetization(std::span<const std::uint8_t> bits) {
  if (bits.empty()) throw InvalidInput("empty bitstring");
  int up = 0;
  for (auto b : bits) up += (b != 0);
  return static_cast<double>(up) / static_cast<double>(bits.size());
}

double magnetization(std::uint64_t index, int n) {
  if (n <= 0 || n > 63 || (index >> n) != 0)
    throw InvalidInput(fmt::format("index {} does not fit {} spins", index, n));
  return static_cast<double>(std::popcount(index)) / n;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return std::round(c);
}

std::vector<double> density_of_states(int n) {
  if (n < 1) throw InvalidInput("density of states needs n >= 1");
  std::vector<double> w(n + 1);
  const double total = std::ldexp(1.0, n);
  for (int k = 0; k <= n; ++k) w[k] = binomial(n, k) / total;
  return w;
}

}  // namespace amp
