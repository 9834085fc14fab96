#include <doctest.h>

#include <cmath>
#include <limits>

#include "amp/errors.hpp"
#include "amp/evolve.hpp"

using namespace amp;

namespace {
const auto kSets = DifficultyEnsemble::standard();
}

TEST_CASE("tts identities") {
  CHECK(tts(100.0, 0.99) == doctest::Approx(100.0));
  CHECK(tts(100.0, 1.0) == 100.0);
  CHECK(tts(100.0, 1e-4) == doctest::Approx(4.605e6).epsilon(1e-3));
  CHECK(std::isinf(tts(100.0, 0.0)));
  CHECK(std::isinf(tts(100.0, -0.1)));
  CHECK(tts(50.0, 1e-9) == doctest::Approx(50.0 * std::log(100.0) / 1e-9).epsilon(1e-6));
}

TEST_CASE("success probability of reference states") {
  CHECK(success_probability(StateVector::basis(5, 31)) == 1.0);
  CHECK(success_probability(StateVector::basis(5, 0)) == 0.0);
  CHECK(success_probability(StateVector::uniform(5)) == doctest::Approx(1.0 / 32));
  CHECK(success_probability(SymmetricState::uniform(5)) == doctest::Approx(1.0 / 32));
}

TEST_CASE("zero runtime leaves the initial state unchanged") {
  EvolutionConfig c;
  c.t_f = 0.0;
  const auto p = kSets.find("hardest").with_n(6);
  CHECK(integrate(Uniform{}, p, c).success_probability() == doctest::Approx(1.0 / 64));
  c.representation = Representation::Full;
  CHECK(integrate(make_scheme(SchemeKind::RfqaM, 6, 1), p, c).success_probability() == doctest::Approx(1.0 / 64));
  CHECK(integrate(ReverseAnneal{0.7, 0.0}, p, c).success_probability() == 0.0);
}

TEST_CASE("reverse anneal with zero dwell and an instantaneous ramp stays in the false well") {
  EvolutionConfig c;
  c.t_f = 1e-9;
  const auto p = kSets.find("hard").with_n(6);
  CHECK(integrate(ReverseAnneal{0.6, 0.0}, p, c).success_probability() < 1e-12);
}

TEST_CASE("adiabatic limit") {
  EvolutionConfig c;
  c.t_f = 20000.0;
  c.max_dt = 2.0;
  const auto p = kSets.find("easiest").with_n(5);
  CHECK(integrate(Uniform{}, p, c).success_probability() > 0.99);
}

TEST_CASE("step halving converges to 1e-7") {
  const auto p = kSets.find("moderate").with_n(6);
  EvolutionConfig c;
  c.t_f = 150.0;
  const double coarse = integrate(Uniform{}, p, c).success_probability();
  c.max_dt *= 0.5;
  const double fine = integrate(Uniform{}, p, c).success_probability();
  CHECK(std::abs(coarse - fine) <= 1e-7);

  c = EvolutionConfig{};
  c.t_f = 150.0;
  const auto m = make_scheme(SchemeKind::RfqaMCouplers, 6, 4);
  const double a = integrate(m, p, c).success_probability();
  c.max_dt *= 0.5;
  CHECK(std::abs(a - integrate(m, p, c).success_probability()) <= 1e-7);
}

TEST_CASE("fourth-order convergence of the Magnus step") {
  const auto p = kSets.find("hard").with_n(5);
  EvolutionConfig c;
  c.t_f = 60.0;
  auto run = [&](double dt) {
    c.max_dt = dt;
    return integrate(Uniform{}, p, c).success_probability();
  };
  const double e1 = std::abs(run(4.0) - run(0.25));
  const double e2 = std::abs(run(2.0) - run(0.25));
  CHECK(e1 / e2 > 10.0);
}

TEST_CASE("RK4 cross-check agrees with the Magnus integrator") {
  const auto p = kSets.find("hard").with_n(6);
  for (auto kind : {SchemeKind::Uniform, SchemeKind::RfqaD, SchemeKind::CouplerMixed}) {
    const auto sch = make_scheme(kind, 6, 2);
    EvolutionConfig c;
    c.t_f = 100.0;
    const double magnus = integrate(sch, p, c).success_probability();
    c.integrator = Integrator::Rk4;
    c.max_dt = 0.02;
    c.norm_tol = 1e-6;
    CHECK(integrate(sch, p, c).success_probability() == doctest::Approx(magnus).epsilon(1e-6));
  }
}

TEST_CASE("norm drift stays below 1e-9 for every scheme at N = 10") {
  const auto p = kSets.find("hardest").with_n(10);
  EvolutionConfig c;
  c.t_f = 120.0;
  SchemeOptions o;
  o.dwell_c = 0.5;
  for (auto kind : all_scheme_kinds()) {
    const auto fs = integrate(make_scheme(kind, 10, 21, o), p, c);
    CHECK(fs.norm_drift <= 1e-9);
  }
}

TEST_CASE("norm drift beyond tolerance aborts with the step count") {
  const auto p = kSets.find("hardest").with_n(5);
  EvolutionConfig c;
  c.t_f = 100.0;
  c.integrator = Integrator::Rk4;
  c.max_dt = 1.5;
  c.norm_tol = 1e-12;
  try {
    integrate(Uniform{}, p, c);
    FAIL("expected NormDriftError");
  } catch (const NormDriftError& e) {
    CHECK(e.step() >= 1);
    CHECK(e.drift() > 1e-12);
  }
}

TEST_CASE("symmetric and full representations agree to 1e-8 at N = 8") {
  const auto p = kSets.find("hardest").with_n(8);
  for (auto kind : {SchemeKind::Uniform, SchemeKind::CouplerFerro, SchemeKind::CouplerAntiferro,
                    SchemeKind::ReverseAnneal}) {
    const auto sch = make_scheme(kind, 8, 6);
    EvolutionConfig c;
    c.representation = Representation::Symmetric;
    const double a = integrate(sch, p, c).success_probability();
    c.representation = Representation::Full;
    const double b = integrate(sch, p, c).success_probability();
    CHECK(std::abs(a - b) <= 1e-8);
  }
  EvolutionConfig c;
  c.representation = Representation::Symmetric;
  CHECK_THROWS_AS(integrate(make_scheme(SchemeKind::RfqaM, 8, 1), p, c), ContractViolation);
}

TEST_CASE("runtime polynomial and step count") {
  EvolutionConfig c;
  CHECK(c.resolved_tf(7) == doctest::Approx(4.0 * 49));
  c.t_f = 10.0;
  CHECK(c.resolved_tf(7) == 10.0);
  CHECK(step_count(Uniform{}, 10.0, c) == 10);
  const RfqaM fast{0.9, 0.1, {0.5, -0.25}};
  CHECK(step_count(fast, 10.0, c) == 200);
}

TEST_CASE("default runtime leaves the easiest N = 5 instance unsaturated") {
  const double p = integrate(Uniform{}, kSets.find("easiest").with_n(5), EvolutionConfig{}).success_probability();
  CHECK(p >= 0.1);
  CHECK(p <= 0.9);
}

TEST_CASE("averaged_tts draw handling") {
  const auto p = kSets.find("hard").with_n(6);
  EvolutionConfig c;
  c.t_f = 100.0;

  const auto single = averaged_tts(SchemeKind::RfqaM, p, c, 1, 55);
  const auto direct = integrate(make_scheme(SchemeKind::RfqaM, 6, derive_seed(55, 0)), p, c);
  CHECK(single.p_success == doctest::Approx(direct.success_probability()).epsilon(1e-14));
  CHECK(single.tts == doctest::Approx(tts(100.0, direct.success_probability())));

  const auto uni = averaged_tts(SchemeKind::Uniform, p, c, 10, 55);
  CHECK(uni.draw_p.size() == 1);
  CHECK(uni.p_stderr == 0.0);

  const auto again = averaged_tts(SchemeKind::RfqaM, p, c, 12, 9);
  const auto twice = averaged_tts(SchemeKind::RfqaM, p, c, 12, 9);
  CHECK(again.draw_p == twice.draw_p);
  CHECK(again.to_json() == twice.to_json());
  CHECK(again.draw_schemes.size() == 12);

  CHECK_THROWS_AS(averaged_tts(SchemeKind::RfqaM, p, c, 0, 9), InvalidInput);
}

TEST_CASE("draw averages are statistically consistent") {
  const auto p = kSets.find("hard").with_n(6);
  EvolutionConfig c;
  const auto small = averaged_tts(SchemeKind::RfqaM, p, c, 50, 1001);
  const auto large = averaged_tts(SchemeKind::RfqaM, p, c, 200, 2002);
  const double se = std::hypot(small.p_stderr, large.p_stderr);
  CHECK(std::abs(small.p_success - large.p_success) <= 3.0 * se);
}

TEST_CASE("uniform TTS is non-decreasing in N on every set") {
  for (const auto& set : kSets.sets) {
    double prev = 0.0;
    for (int n = 5; n <= 12; ++n) {
      const auto rec = averaged_tts(SchemeKind::Uniform, set.with_n(n), EvolutionConfig{}, 1, 0);
      CHECK(rec.tts >= prev);
      prev = rec.tts;
    }
  }
}
