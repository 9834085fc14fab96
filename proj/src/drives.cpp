#include "amp/drives.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <fmt/format.h>

#include "amp/errors.hpp"

namespace amp {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// 53-bit uniform in [0, 1), independent of the standard library's
// distribution implementations so draws match across toolchains.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

struct KindInfo {
  SchemeKind kind;
  const char* name;
  const char* label;
};

constexpr KindInfo kKinds[] = {
    {SchemeKind::Uniform, "uniform", "S"},
    {SchemeKind::Inhomogeneous, "inhomogeneous", "I"},
    {SchemeKind::CouplerFerro, "ferro", "C_F"},
    {SchemeKind::CouplerAntiferro, "antiferro", "C_A"},
    {SchemeKind::CouplerMixed, "mixed", "C_M"},
    {SchemeKind::RfqaM, "rfqa-m", "M"},
    {SchemeKind::RfqaMCouplers, "rfqa-mc", "CM"},
    {SchemeKind::SyncM, "sync-m", "SyncM"},
    {SchemeKind::SyncMCouplers, "sync-mc", "SyncMC"},
    {SchemeKind::RfqaD, "rfqa-d", "D"},
    {SchemeKind::ReverseAnneal, "reverse", "R"},
};

void fill_rfqa_m(int n, double s, double t, double alpha, double kappa,
                 const std::vector<double>& freq_of_site, HamiltonianTerms& h) {
  for (int i = 0; i < n; ++i)
    h.x[i] = -(1.0 - s) * kappa * (1.0 + alpha * std::sin(kTwoPi * freq_of_site[i] * t));
}

std::vector<double> site_freqs(const SyncM& m) {
  std::vector<double> f(m.group_of_site.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = m.group_freqs.at(m.group_of_site[i]);
  return f;
}

const char* coupler_name(CouplerKind k) {
  switch (k) {
    case CouplerKind::Ferro: return "ferro";
    case CouplerKind::Antiferro: return "antiferro";
    case CouplerKind::Mixed: return "mixed";
  }
  return "?";
}

CouplerKind parse_coupler(const std::string& s) {
  if (s == "ferro") return CouplerKind::Ferro;
  if (s == "antiferro") return CouplerKind::Antiferro;
  if (s == "mixed") return CouplerKind::Mixed;
  throw InvalidInput(fmt::format("unknown coupler kind '{}'", s));
}

}  // namespace

std::string to_string(SchemeKind kind) {
  for (const auto& k : kKinds)
    if (k.kind == kind) return k.name;
  return "?";
}

std::string table_label(SchemeKind kind) {
  for (const auto& k : kKinds)
    if (k.kind == kind) return k.label;
  return "?";
}

SchemeKind parse_scheme_kind(const std::string& name) {
  for (const auto& k : kKinds)
    if (name == k.name || name == k.label) return k.kind;
  throw InvalidInput(fmt::format("unknown scheme '{}'", name));
}

std::vector<SchemeKind> all_scheme_kinds() {
  std::vector<SchemeKind> out;
  for (const auto& k : kKinds) out.push_back(k.kind);
  return out;
}

bool is_randomized(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::Uniform:
    case SchemeKind::Inhomogeneous:
    case SchemeKind::CouplerFerro:
    case SchemeKind::CouplerAntiferro:
      return false;
    default:
      return true;
  }
}

FrequencyBand default_band(int n) {
  const double scale = std::pow(static_cast<double>(n), 1.5);
  return {0.01 / scale, 0.02 / scale};
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<double> sample_frequencies(int n, std::uint64_t seed, FrequencyBand band) {
  if (!(band.f_min > 0.0 && band.f_max > band.f_min))
    throw InvalidInput(fmt::format("invalid frequency band [{}, {}]", band.f_min, band.f_max));
  if (n < 0) throw InvalidInput("negative frequency count");
  std::mt19937_64 rng(seed);
  std::vector<double> f(n);
  for (auto& v : f) {
    const double mag = band.f_min + (band.f_max - band.f_min) * uniform01(rng);
    v = (rng() >> 63) ? -mag : mag;
  }
  return f;
}

std::vector<int> sample_signs(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<int> s(pair_count(n));
  for (auto& v : s) v = (rng() >> 63) ? -1 : 1;
  return s;
}

std::vector<int> partition_sites(int n, int groups) {
  if (groups < 1 || groups > n) throw InvalidInput(fmt::format("cannot split {} sites into {} groups", n, groups));
  std::vector<int> g(n);
  for (int i = 0; i < n; ++i) g[i] = static_cast<int>(static_cast<long>(i) * groups / n);
  return g;
}

DriveScheme make_scheme(SchemeKind kind, int n, std::uint64_t seed, const SchemeOptions& o) {
  if (n < 2) throw InvalidInput("schemes need at least two spins");
  const double kappa = o.kappa.value_or(1.0 / n);
  const double kappa_r = o.kappa_r.value_or(1.0 / (static_cast<double>(n) * n));
  const FrequencyBand band = o.band.value_or(default_band(n));
  // Independent streams for the different random ingredients of one draw.
  const auto site_seed = derive_seed(seed, 1);
  const auto pair_seed = derive_seed(seed, 2);
  const auto misc_seed = derive_seed(seed, 3);

  auto sync = [&] {
    SyncM m{o.alpha_bar, kappa, partition_sites(n, o.sync_groups), {}};
    m.group_freqs = sample_frequencies(o.sync_groups, site_seed, band);
    return m;
  };

  switch (kind) {
    case SchemeKind::Uniform: return Uniform{};
    case SchemeKind::Inhomogeneous: return Inhomogeneous{o.r};
    case SchemeKind::CouplerFerro: return Couplers{CouplerKind::Ferro, {}};
    case SchemeKind::CouplerAntiferro: return Couplers{CouplerKind::Antiferro, {}};
    case SchemeKind::CouplerMixed: return Couplers{CouplerKind::Mixed, sample_signs(n, pair_seed)};
    case SchemeKind::RfqaM: return RfqaM{o.alpha_bar, kappa, sample_frequencies(n, site_seed, band)};
    case SchemeKind::RfqaD: return RfqaD{o.alpha_bar, kappa, sample_frequencies(n, site_seed, band)};
    case SchemeKind::SyncM: return sync();
    case SchemeKind::RfqaMCouplers:
      return RfqaMCouplers{RfqaM{o.alpha_bar, kappa, sample_frequencies(n, site_seed, band)}, kappa_r,
                           sample_frequencies(static_cast<int>(pair_count(n)), pair_seed, band)};
    case SchemeKind::SyncMCouplers: {
      // Couplers are synchronized too: one frequency per unordered group pair.
      SyncM m = sync();
      const int k = o.sync_groups;
      const auto class_freqs = sample_frequencies(k * (k + 1) / 2, pair_seed, band);
      std::vector<double> cf(pair_count(n));
      std::size_t p = 0;
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j, ++p) {
          const int a = std::min(m.group_of_site[i], m.group_of_site[j]);
          const int b = std::max(m.group_of_site[i], m.group_of_site[j]);
          cf[p] = class_freqs[a * k - a * (a - 1) / 2 + (b - a)];
        }
      }
      return RfqaMCouplers{std::move(m), kappa_r, std::move(cf)};
    }
    case SchemeKind::ReverseAnneal: {
      if (!(o.s_pause_min > 0.0 && o.s_pause_max < 1.0 && o.s_pause_min <= o.s_pause_max))
        throw InvalidInput("pause window must lie inside (0, 1)");
      std::mt19937_64 rng(misc_seed);
      const double sp = o.s_pause_min + (o.s_pause_max - o.s_pause_min) * uniform01(rng);
      return ReverseAnneal{sp, o.dwell_c * n * n};
    }
  }
  throw InvalidInput("unhandled scheme kind");
}

double shutdown_point(int n, int i, double r) {
  return std::pow(static_cast<double>(n - i) / n, 1.0 / r);
}

double gamma_i(const Inhomogeneous& scheme, int n, int i, double s) {
  const double lo = shutdown_point(n, i, scheme.r);
  const double hi = shutdown_point(n, i - 1, scheme.r);
  if (s < lo) return 1.0;
  if (s > hi) return 0.0;
  const double ramp = n * (1.0 - std::pow(s, scheme.r)) + (1.0 - i);
  return std::clamp(ramp, 0.0, 1.0);
}

double reverse_profile(const ReverseAnneal& scheme, double t, double total_time) {
  if (!(scheme.s_pause > 0.0 && scheme.s_pause < 1.0))
    throw InvalidInput(fmt::format("pause point {} outside (0, 1)", scheme.s_pause));
  if (scheme.dwell < 0.0 || scheme.dwell > total_time)
    throw InvalidInput(fmt::format("dwell {} does not fit in total time {}", scheme.dwell, total_time));
  if (t < 0.0 || t > total_time) throw InvalidInput(fmt::format("time {} outside [0, {}]", t, total_time));
  const double ramp = 0.5 * (total_time - scheme.dwell);
  const double sp = scheme.s_pause;
  if (t <= 0.0 || t >= total_time) return 1.0;
  if (t < ramp) return 1.0 - (1.0 - sp) * t / ramp;
  if (t <= ramp + scheme.dwell) return sp;
  return sp + (1.0 - sp) * (t - ramp - scheme.dwell) / ramp;
}

double schedule_s(const DriveScheme& scheme, double t, double total_time) {
  if (const auto* rev = std::get_if<ReverseAnneal>(&scheme)) return reverse_profile(*rev, t, total_time);
  if (total_time <= 0.0) return 1.0;
  return std::clamp(t / total_time, 0.0, 1.0);
}

HamiltonianTerms terms_at(const DriveScheme& scheme, const AmpParams& params, double s, double t) {
  if (!(s >= 0.0 && s <= 1.0)) throw InvalidInput(fmt::format("annealing parameter {} outside [0, 1]", s));
  if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidInput(fmt::format("time {} must be finite and >= 0", t));
  const int n = params.n;
  const double inv_n = 1.0 / n;
  HamiltonianTerms h(n);
  h.diag_scale = s;

  auto uniform_field = [&] { std::fill(h.x.begin(), h.x.end(), -(1.0 - s) * inv_n); };

  std::visit(overloaded{
                 [&](const Uniform&) { uniform_field(); },
                 [&](const ReverseAnneal&) { uniform_field(); },
                 [&](const Inhomogeneous& in) {
                   for (int i = 0; i < n; ++i) h.x[i] = -gamma_i(in, n, i + 1, s) * inv_n;
                 },
                 [&](const Couplers& c) {
                   uniform_field();
                   h.xx.assign(pair_count(n), 0.0);
                   const double mag = s * (1.0 - s) * inv_n;
                   if (c.kind == CouplerKind::Mixed) {
                     if (c.signs.size() != h.xx.size()) throw InvalidInput("mixed couplers need one sign per pair");
                     for (std::size_t p = 0; p < h.xx.size(); ++p) h.xx[p] = mag * c.signs[p];
                   } else {
                     std::fill(h.xx.begin(), h.xx.end(), c.kind == CouplerKind::Ferro ? -mag : mag);
                   }
                 },
                 [&](const RfqaM& m) {
                   if (m.freqs.size() != static_cast<std::size_t>(n)) throw InvalidInput("RFQA-M needs one frequency per site");
                   fill_rfqa_m(n, s, t, m.alpha_bar, m.kappa, m.freqs, h);
                 },
                 [&](const SyncM& m) {
                   if (m.group_of_site.size() != static_cast<std::size_t>(n)) throw InvalidInput("SyncM needs a group per site");
                   fill_rfqa_m(n, s, t, m.alpha_bar, m.kappa, site_freqs(m), h);
                 },
                 [&](const RfqaD& d) {
                   if (d.freqs.size() != static_cast<std::size_t>(n)) throw InvalidInput("RFQA-D needs one frequency per site");
                   h.y.assign(n, 0.0);
                   for (int i = 0; i < n; ++i) {
                     const double angle = d.alpha_bar * std::sin(kTwoPi * d.freqs[i] * t);
                     h.x[i] = -(1.0 - s) * d.kappa * std::cos(angle);
                     h.y[i] = -(1.0 - s) * d.kappa * std::sin(angle);
                   }
                 },
                 [&](const RfqaMCouplers& mc) {
                   std::visit(overloaded{
                                  [&](const RfqaM& m) { fill_rfqa_m(n, s, t, m.alpha_bar, m.kappa, m.freqs, h); },
                                  [&](const SyncM& m) { fill_rfqa_m(n, s, t, m.alpha_bar, m.kappa, site_freqs(m), h); },
                              },
                              mc.base);
                   if (mc.coupler_freqs.size() != pair_count(n)) throw InvalidInput("couplers need one frequency per pair");
                   h.xx.resize(pair_count(n));
                   for (std::size_t p = 0; p < h.xx.size(); ++p)
                     h.xx[p] = (1.0 - s) * mc.kappa_r * std::sin(kTwoPi * mc.coupler_freqs[p] * t);
                 },
             },
             scheme);
  return h;
}

bool is_symmetric_scheme(const DriveScheme& scheme) {
  return std::visit(overloaded{
                        [](const Uniform&) { return true; },
                        [](const ReverseAnneal&) { return true; },
                        [](const Couplers& c) { return c.kind != CouplerKind::Mixed; },
                        [](const SyncM& m) {
                          return std::adjacent_find(m.group_of_site.begin(), m.group_of_site.end(),
                                                    std::not_equal_to<>()) == m.group_of_site.end();
                        },
                        [](const auto&) { return false; },
                    },
                    scheme);
}

double fastest_frequency(const DriveScheme& scheme) {
  auto max_abs = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double f : v) m = std::max(m, std::abs(f));
    return m;
  };
  return std::visit(overloaded{
                        [&](const RfqaM& m) { return max_abs(m.freqs); },
                        [&](const RfqaD& d) { return max_abs(d.freqs); },
                        [&](const SyncM& m) { return max_abs(m.group_freqs); },
                        [&](const RfqaMCouplers& mc) {
                          const double base = std::visit(
                              overloaded{[&](const RfqaM& m) { return max_abs(m.freqs); },
                                         [&](const SyncM& m) { return max_abs(m.group_freqs); }},
                              mc.base);
                          return std::max(base, max_abs(mc.coupler_freqs));
                        },
                        [](const auto&) { return 0.0; },
                    },
                    scheme);
}

std::string scheme_name(const DriveScheme& scheme) {
  return std::visit(overloaded{
                        [](const Uniform&) -> std::string { return "uniform"; },
                        [](const Inhomogeneous&) -> std::string { return "inhomogeneous"; },
                        [](const Couplers& c) -> std::string { return coupler_name(c.kind); },
                        [](const RfqaM&) -> std::string { return "rfqa-m"; },
                        [](const RfqaD&) -> std::string { return "rfqa-d"; },
                        [](const SyncM&) -> std::string { return "sync-m"; },
                        [](const RfqaMCouplers& mc) -> std::string {
                          return std::holds_alternative<SyncM>(mc.base) ? "sync-mc" : "rfqa-mc";
                        },
                        [](const ReverseAnneal&) -> std::string { return "reverse"; },
                    },
                    scheme);
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

namespace {

nlohmann::json sync_json(const SyncM& m) {
  return {{"alpha_bar", m.alpha_bar}, {"kappa", m.kappa}, {"group_of_site", m.group_of_site},
          {"group_freqs", m.group_freqs}};
}

SyncM sync_from(const nlohmann::json& j) {
  return SyncM{j.at("alpha_bar").get<double>(), j.at("kappa").get<double>(),
               j.at("group_of_site").get<std::vector<int>>(), j.at("group_freqs").get<std::vector<double>>()};
}

}  // namespace

nlohmann::json to_json(const DriveScheme& scheme) {
  nlohmann::json j = std::visit(
      overloaded{
          [](const Uniform&) { return nlohmann::json::object(); },
          [](const Inhomogeneous& in) { return nlohmann::json{{"r", in.r}}; },
          [](const Couplers& c) {
            nlohmann::json o{{"kind", coupler_name(c.kind)}};
            if (!c.signs.empty()) o["signs"] = c.signs;
            return o;
          },
          [](const RfqaM& m) {
            return nlohmann::json{{"alpha_bar", m.alpha_bar}, {"kappa", m.kappa}, {"freqs", m.freqs}};
          },
          [](const RfqaD& d) {
            return nlohmann::json{{"alpha_bar", d.alpha_bar}, {"kappa", d.kappa}, {"freqs", d.freqs}};
          },
          [](const SyncM& m) { return sync_json(m); },
          [](const RfqaMCouplers& mc) {
            nlohmann::json base = std::visit(
                overloaded{[](const RfqaM& m) {
                             return nlohmann::json{{"alpha_bar", m.alpha_bar}, {"kappa", m.kappa}, {"freqs", m.freqs}};
                           },
                           [](const SyncM& m) { return sync_json(m); }},
                mc.base);
            return nlohmann::json{{"base", base}, {"kappa_r", mc.kappa_r}, {"coupler_freqs", mc.coupler_freqs}};
          },
          [](const ReverseAnneal& r) { return nlohmann::json{{"s_pause", r.s_pause}, {"dwell", r.dwell}}; },
      },
      scheme);
  j["scheme"] = scheme_name(scheme);
  return j;
}

DriveScheme scheme_from_json(const nlohmann::json& j) {
  const auto name = j.at("scheme").get<std::string>();
  if (name == "uniform") return Uniform{};
  if (name == "inhomogeneous") return Inhomogeneous{j.value("r", 1.0)};
  if (name == "ferro" || name == "antiferro" || name == "mixed")
    return Couplers{parse_coupler(name), j.value("signs", std::vector<int>{})};
  if (name == "rfqa-m")
    return RfqaM{j.at("alpha_bar").get<double>(), j.at("kappa").get<double>(), j.at("freqs").get<std::vector<double>>()};
  if (name == "rfqa-d")
    return RfqaD{j.at("alpha_bar").get<double>(), j.at("kappa").get<double>(), j.at("freqs").get<std::vector<double>>()};
  if (name == "sync-m") return sync_from(j);
  if (name == "rfqa-mc" || name == "sync-mc") {
    const auto& b = j.at("base");
    std::variant<RfqaM, SyncM> base;
    if (name == "sync-mc")
      base = sync_from(b);
    else
      base = RfqaM{b.at("alpha_bar").get<double>(), b.at("kappa").get<double>(), b.at("freqs").get<std::vector<double>>()};
    return RfqaMCouplers{std::move(base), j.at("kappa_r").get<double>(),
                         j.at("coupler_freqs").get<std::vector<double>>()};
  }
  if (name == "reverse") return ReverseAnneal{j.at("s_pause").get<double>(), j.at("dwell").get<double>()};
  throw InvalidInput(fmt::format("unknown scheme '{}' in JSON", name));
}

}  // namespace amp
