#include "amp/evolve.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "amp/errors.hpp"
#include "amp/krylov.hpp"
#include "amp/parallel.hpp"

namespace amp {
namespace {

// Gauss-Legendre nodes and the commutator-free weights of the 4th-order scheme.
const double kSqrt3 = std::sqrt(3.0);
const double kNode1 = 0.5 - kSqrt3 / 6.0;
const double kNode2 = 0.5 + kSqrt3 / 6.0;
const double kWeightA = 0.25 + kSqrt3 / 6.0;
const double kWeightB = 0.25 - kSqrt3 / 6.0;

constexpr cplx kMinusI{0.0, -1.0};

double vec_norm(std::span<const cplx> v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(s);
}

// exp(-i dt H) v for a small dense Hermitian H.
void dense_expm(const Eigen::MatrixXcd& h, double dt, std::span<cplx> v) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  Eigen::Map<Eigen::VectorXcd> x(v.data(), static_cast<Eigen::Index>(v.size()));
  Eigen::VectorXcd c = es.eigenvectors().adjoint() * x;
  for (Eigen::Index k = 0; k < c.size(); ++k) c[k] *= std::exp(cplx{0.0, -dt * es.eigenvalues()[k]});
  x = es.eigenvectors() * c;
}

// Applies one term set in whichever representation the run uses.
class Kernel {
 public:
  Kernel(const AmpParams& params, bool symmetric)
      : params_(params), symmetric_(symmetric), f_(sector_energies(params)) {}

  void apply(const HamiltonianTerms& t, std::span<const cplx> in, std::span<cplx> out) const {
    if (symmetric_) {
      const Eigen::MatrixXcd h = symmetric_matrix(t, params_);
      Eigen::Map<const Eigen::VectorXcd> x(in.data(), static_cast<Eigen::Index>(in.size()));
      Eigen::Map<Eigen::VectorXcd>(out.data(), static_cast<Eigen::Index>(out.size())) = h * x;
    } else {
      apply_hamiltonian(t, f_, in, out);
    }
  }

  void expm(const HamiltonianTerms& t, double dt, std::span<cplx> v, KrylovWorkspace& ws, double tol) const {
    if (symmetric_) {
      dense_expm(symmetric_matrix(t, params_), dt, v);
    } else {
      MatVec mv = [&](std::span<const cplx> in, std::span<cplx> out) { apply_hamiltonian(t, f_, in, out); };
      krylov_expm(mv, v, dt, ws, tol);
    }
  }

 private:
  const AmpParams& params_;
  bool symmetric_;
  std::vector<double> f_;
};

}  // namespace

double RuntimePolynomial::operator()(int n) const { return c * std::pow(static_cast<double>(n), p); }

double FinalState::success_probability() const {
  if (symmetric) return amp::success_probability(*symmetric);
  return amp::success_probability(*full);
}

double success_probability(const StateVector& psi) { return std::norm(psi.amp.back()); }
double success_probability(const SymmetricState& phi) { return std::norm(phi.amp.back()); }

double tts(double t_f, double p) {
  if (!(p > 0.0)) return std::numeric_limits<double>::infinity();
  if (p >= 1.0) return t_f;
  return t_f * std::log(0.01) / std::log1p(-p);
}

long step_count(const DriveScheme& scheme, double t_f, const EvolutionConfig& cfg) {
  if (t_f <= 0.0) return 0;
  double dt = cfg.max_dt;
  const double f = fastest_frequency(scheme);
  if (f > 0.0) dt = std::min(dt, 1.0 / (cfg.steps_per_period * f));
  return static_cast<long>(std::ceil(t_f / dt - 1e-9));
}

FinalState integrate(const DriveScheme& scheme, const AmpParams& params, const EvolutionConfig& cfg) {
  params.validate();
  const double t_f = cfg.resolved_tf(params.n);
  if (!(t_f >= 0.0) || !std::isfinite(t_f)) throw InvalidInput(fmt::format("invalid total time {}", t_f));

  Representation rep = cfg.representation;
  if (rep == Representation::Auto) rep = is_symmetric_scheme(scheme) ? Representation::Symmetric : Representation::Full;
  if (rep == Representation::Symmetric && !is_symmetric_scheme(scheme))
    throw ContractViolation(fmt::format("scheme '{}' is not site-uniform", scheme_name(scheme)));
  if (rep == Representation::Full && params.n > cfg.full_space_cap)
    throw InvalidInput(fmt::format("full register of {} spins exceeds the cap of {}", params.n, cfg.full_space_cap));
  const bool symmetric = rep == Representation::Symmetric;
  const bool reverse = std::holds_alternative<ReverseAnneal>(scheme);

  std::vector<cplx> psi;
  if (symmetric) {
    psi = reverse ? SymmetricState::sector(params.n, 0).amp : SymmetricState::uniform(params.n).amp;
  } else {
    psi = reverse ? StateVector::basis(params.n, 0).amp : StateVector::uniform(params.n).amp;
  }

  const Kernel kernel(params, symmetric);
  const long steps = step_count(scheme, t_f, cfg);
  const double dt = steps > 0 ? t_f / steps : 0.0;
  auto terms = [&](double t) {
    t = std::clamp(t, 0.0, t_f);
    return terms_at(scheme, params, schedule_s(scheme, t, t_f), t);
  };

  KrylovWorkspace ws;
  std::vector<cplx> k1, k2, k3, k4, tmp;
  if (cfg.integrator == Integrator::Rk4) {
    for (auto* v : {&k1, &k2, &k3, &k4, &tmp}) v->resize(psi.size());
  }

  double drift = 0.0;
  for (long step = 0; step < steps; ++step) {
    const double t0 = step * dt;
    if (cfg.integrator == Integrator::Magnus4) {
      const auto h1 = terms(t0 + kNode1 * dt);
      const auto h2 = terms(t0 + kNode2 * dt);
      kernel.expm(HamiltonianTerms::combine(kWeightA, h1, kWeightB, h2), dt, psi, ws, cfg.krylov_tol);
      kernel.expm(HamiltonianTerms::combine(kWeightB, h1, kWeightA, h2), dt, psi, ws, cfg.krylov_tol);
    } else {
      const auto ha = terms(t0);
      const auto hm = terms(t0 + 0.5 * dt);
      const auto hb = terms(t0 + dt);
      auto deriv = [&](const HamiltonianTerms& h, std::span<const cplx> in, std::vector<cplx>& out) {
        kernel.apply(h, in, out);
        for (auto& z : out) z *= kMinusI;
      };
      deriv(ha, psi, k1);
      for (std::size_t i = 0; i < psi.size(); ++i) tmp[i] = psi[i] + 0.5 * dt * k1[i];
      deriv(hm, tmp, k2);
      for (std::size_t i = 0; i < psi.size(); ++i) tmp[i] = psi[i] + 0.5 * dt * k2[i];
      deriv(hm, tmp, k3);
      for (std::size_t i = 0; i < psi.size(); ++i) tmp[i] = psi[i] + dt * k3[i];
      deriv(hb, tmp, k4);
      for (std::size_t i = 0; i < psi.size(); ++i) psi[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }

    const double nrm = vec_norm(psi);
    drift = std::abs(nrm - 1.0);
    if (drift > cfg.norm_tol)
      throw NormDriftError(fmt::format("norm drift {:.3e} exceeds tolerance {:.1e} after {} of {} steps", drift,
                                       cfg.norm_tol, step + 1, steps),
                           step + 1, drift);
    if (cfg.renormalize)
      for (auto& z : psi) z /= nrm;
  }

  FinalState out;
  out.representation = rep;
  out.t_f = t_f;
  out.steps = steps;
  out.norm_drift = std::abs(vec_norm(psi) - 1.0);
  if (symmetric)
    out.symmetric = SymmetricState{params.n, std::move(psi)};
  else
    out.full = StateVector{params.n, std::move(psi)};
  return out;
}

nlohmann::json family_json(SchemeKind kind, int n, const SchemeOptions& o) {
  nlohmann::json j{{"kind", to_string(kind)}, {"label", table_label(kind)}};
  const FrequencyBand band = o.band.value_or(default_band(n));
  switch (kind) {
    case SchemeKind::Inhomogeneous: j["r"] = o.r; break;
    case SchemeKind::RfqaM:
    case SchemeKind::RfqaD:
    case SchemeKind::SyncM:
    case SchemeKind::RfqaMCouplers:
    case SchemeKind::SyncMCouplers:
      j["alpha_bar"] = o.alpha_bar;
      j["kappa"] = o.kappa.value_or(1.0 / n);
      j["band"] = {band.f_min, band.f_max};
      if (kind == SchemeKind::SyncM || kind == SchemeKind::SyncMCouplers) j["groups"] = o.sync_groups;
      if (kind == SchemeKind::RfqaMCouplers || kind == SchemeKind::SyncMCouplers)
        j["kappa_r"] = o.kappa_r.value_or(1.0 / (static_cast<double>(n) * n));
      break;
    case SchemeKind::ReverseAnneal:
      j["s_pause_window"] = {o.s_pause_min, o.s_pause_max};
      j["dwell"] = o.dwell_c * n * n;
      break;
    default: break;
  }
  return j;
}

nlohmann::json TtsRecord::to_json() const {
  nlohmann::json j{{"set", set},         {"n", n},
                   {"scheme", amp::to_string(kind)},
                   {"t_f", t_f},         {"p_success", p_success},
                   {"p_stderr", p_stderr},
                   {"seed", seed},       {"family", family},
                   {"draws", draw_p.size()}};
  j["tts"] = std::isfinite(tts) ? nlohmann::json(tts) : nlohmann::json("inf");
  nlohmann::json draws = nlohmann::json::array();
  for (std::size_t d = 0; d < draw_p.size(); ++d) {
    nlohmann::json e{{"seed", draw_seeds[d]}, {"p_success", draw_p[d]}};
    if (d < draw_schemes.size()) e["scheme"] = draw_schemes[d];
    draws.push_back(std::move(e));
  }
  j["per_draw"] = std::move(draws);
  return j;
}

TtsRecord averaged_tts(SchemeKind kind, const AmpParams& params, const EvolutionConfig& cfg, int draws,
                       std::uint64_t seed, const SchemeOptions& opts) {
  params.validate();
  if (draws < 1) throw InvalidInput("averaged_tts needs at least one draw");
  const int count = is_randomized(kind) ? draws : 1;

  TtsRecord rec;
  rec.n = params.n;
  rec.kind = kind;
  rec.t_f = cfg.resolved_tf(params.n);
  rec.seed = seed;
  rec.family = family_json(kind, params.n, opts);
  rec.draw_seeds.resize(count);
  rec.draw_p.resize(count);
  rec.draw_schemes.resize(count);

  // Per-draw evolutions run one after another; the parallelism lives one
  // level up so that small registers do not pay thread start-up per draw.
  parallel_for(
      static_cast<std::size_t>(count),
      [&](std::size_t d) {
        const std::uint64_t ds = derive_seed(seed, d);
        rec.draw_seeds[d] = ds;
        const DriveScheme scheme = make_scheme(kind, params.n, ds, opts);
        rec.draw_schemes[d] = to_json(scheme);
        try {
          rec.draw_p[d] = integrate(scheme, params, cfg).success_probability();
        } catch (const std::exception& e) {
          throw std::runtime_error(fmt::format("draw seed {}: {}", ds, e.what()));
        }
      },
      1);

  double mean = 0.0;
  for (double p : rec.draw_p) mean += p;
  mean /= count;
  double var = 0.0;
  for (double p : rec.draw_p) var += (p - mean) * (p - mean);
  rec.p_success = mean;
  rec.p_stderr = count > 1 ? std::sqrt(var / (count - 1) / count) : 0.0;
  rec.tts = tts(rec.t_f, mean);
  return rec;
}

}  // namespace amp
