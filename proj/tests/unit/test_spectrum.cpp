#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "amp/errors.hpp"
#include "amp/spectrum.hpp"
#include "oracles.hpp"

using namespace amp;

TEST_CASE("Lanczos agrees with a dense solve, including degenerate levels") {
  std::mt19937_64 rng(1);
  for (int n : {4, 6, 8}) {
    const AmpParams p{n, 0.2, 0.8};
    const auto t = test::random_terms(n, rng);
    const auto dense = test::dense_hamiltonian(t, p);
    const auto ref = dense_lowest(dense, 6, false);
    const auto f = sector_energies(p);
    MatVec mv = [&](std::span<const cplx> in, std::span<cplx> out) { apply_hamiltonian(t, f, in, out); };
    const auto got = lanczos_lowest(mv, std::size_t{1} << n, 6, false);
    for (int k = 0; k < 6; ++k) CHECK(got.values[k] == doctest::Approx(ref.values[k]).epsilon(1e-9));
  }
  // A uniform field with no diagonal is N-fold degenerate in its first excited level.
  const int n = 7;
  const AmpParams p{n, 0.2, 0.8};
  HamiltonianTerms t(n);
  for (auto& x : t.x) x = -1.0;
  const auto f = sector_energies(p);
  MatVec mv = [&](std::span<const cplx> in, std::span<cplx> out) { apply_hamiltonian(t, f, in, out); };
  const auto got = lanczos_lowest(mv, std::size_t{1} << n, 4, false);
  CHECK(got.values[0] == doctest::Approx(-7.0));
  for (int k = 1; k < 4; ++k) CHECK(got.values[k] == doctest::Approx(-5.0));
}

TEST_CASE("symmetric subspace levels match the full register") {
  for (int n = 4; n <= 10; n += 2) {
    const AmpParams p{n, 0.3, 0.64};
    for (auto kind : {SchemeKind::Uniform, SchemeKind::CouplerFerro, SchemeKind::CouplerAntiferro}) {
      const auto sch = make_scheme(kind, n, 1);
      SpectrumOptions sym, full;
      sym.representation = Representation::Symmetric;
      full.representation = Representation::Full;
      for (double s : {0.1, 0.5, 0.9}) {
        const auto a = instantaneous_spectrum(sch, p, s, 0.0, 1, false, sym);
        const auto b = instantaneous_spectrum(sch, p, s, 0.0, 1, false, full);
        CHECK(a.energies[0] == doctest::Approx(b.energies[0]).epsilon(1e-9));
        if (n > 8) continue;
        // Every Dicke level is also a full-register level.
        const auto all_sym = instantaneous_spectrum(sch, p, s, 0.0, n + 1, false, sym);
        const auto dense = dense_lowest(test::dense_hamiltonian(terms_at(sch, p, s, 0.0), p), 1 << n, false);
        for (double e : all_sym.energies) {
          double best = 1e9;
          for (double v : dense.values) best = std::min(best, std::abs(v - e));
          CHECK(best < 1e-9);
        }
      }
    }
  }
}

TEST_CASE("uniform gap at s = 1 is the lowest classical excitation") {
  // At small N the false well (gap A) lies below the single flip from all-up.
  const AmpParams small{8, 0.2, 0.8};
  const auto sp = instantaneous_spectrum(Uniform{}, small, 1.0, 0.0, 2, false);
  CHECK(sp.energies[1] - sp.energies[0] == doctest::Approx(0.2));

  const AmpParams large{40, 0.2, 0.8};
  const double flip = sector_energy(large, 39) - sector_energy(large, 40);
  REQUIRE(flip < large.a);
  const auto sl = instantaneous_spectrum(Uniform{}, large, 1.0, 0.0, 2, false);
  CHECK(sl.energies[1] - sl.energies[0] == doctest::Approx(flip));
}

TEST_CASE("minimum gap of the easiest set at N = 8") {
  const auto p = DifficultyEnsemble::standard().find("easiest").with_n(8);
  const auto prof = gap_profile(Uniform{}, p);
  const double expect = std::exp2(-2.04 - 0.31 * 8);
  CHECK(prof.delta_min == doctest::Approx(expect).epsilon(0.15));
  for (double g : prof.gaps) {
    CHECK(g > 0.0);
    CHECK(prof.delta_min <= g);
  }
}

TEST_CASE("critical field and forward approximation") {
  const AmpParams p6{6, 0.2, 0.8};
  CHECK(flip_denominator(p6, 1.0, 1) == doctest::Approx(2.85));
  const double kc = critical_kappa(p6);
  CHECK(forward_gap(p6, kc, true) / forward_gap(p6, kc, false) == doctest::Approx(2.0 * std::numbers::pi / 6));
  CHECK(forward_gap_sweep_units(p6, kc, false) == doctest::Approx(forward_gap(p6, kc, false) / (1.0 + kc)));

  const AmpParams easy{10, 0.34, 0.59};
  CHECK(critical_kappa(easy) == doctest::Approx(1.73).epsilon(0.1 / 1.73));

  CHECK(critical_kappa(AmpParams{10, 1e-6, 0.8}) < 0.01);
  CHECK(critical_kappa(AmpParams{10, 1e-6, 0.8}, CorrectionOrder::SecondOrder) < 0.01);
  CHECK(critical_kappa(AmpParams{10, 0.2, 0.8}) < critical_kappa(AmpParams{10, 0.3, 0.8}));
  CHECK_THROWS_AS(forward_gap(p6, 0.0, true), InvalidInput);
}

TEST_CASE("minimum-gap location agrees with the critical field within 20% at N = 10") {
  const auto p = DifficultyEnsemble::standard().find("easiest").with_n(10);
  const auto prof = gap_profile(Uniform{}, p);
  // In the frame where the problem energy has unit weight, kappa = (1 - s)/s.
  const double numeric = field_from_s(prof.s_min);
  CHECK(numeric == doctest::Approx(critical_kappa(p)).epsilon(0.2));
  CHECK(s_from_field(field_from_s(0.37)) == doctest::Approx(0.37));
}

TEST_CASE("overlap trace") {
  const AmpParams p{8, 0.2, 0.8};
  std::vector<double> grid;
  for (int i = 0; i <= 400; ++i) grid.push_back(i / 400.0);
  const auto tr = overlap_trace(Uniform{}, p, grid);
  CHECK(tr.ground_up.back() == doctest::Approx(1.0));
  CHECK(tr.ground_up.front() == doctest::Approx(1.0 / 256));
  CHECK(tr.ground_down.front() == doctest::Approx(1.0 / 256));
  const auto prof = gap_profile(Uniform{}, p);
  int swaps = 0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const bool before = tr.ground_down[i - 1] > tr.ground_up[i - 1];
    const bool after = tr.ground_down[i] > tr.ground_up[i];
    if (before && !after) {
      ++swaps;
      CHECK(std::abs(grid[i] - prof.s_min) < 0.02);
    }
  }
  CHECK(swaps == 1);
}

TEST_CASE("level diagram rows are sorted and non-negative") {
  const AmpParams p{6, 0.28, 0.7};
  GapOptions o;
  o.resolution = 21;
  const auto d = level_diagram(make_scheme(SchemeKind::Inhomogeneous, 6, 0), p, 5, o);
  for (const auto& row : d.differences) {
    REQUIRE(row.size() == 5);
    CHECK(row[0] >= -1e-12);
    for (std::size_t k = 1; k < row.size(); ++k) CHECK(row[k] >= row[k - 1] - 1e-12);
  }
}

TEST_CASE("local minima") {
  CHECK(local_minima({3, 1, 2, 0.5, 4}) == std::vector<std::size_t>{1, 3});
  CHECK(local_minima({1, 2, 3}).empty());
  CHECK(local_minima({3, 1, 1, 2}) == std::vector<std::size_t>{1});
}

TEST_CASE("RFQA-D minimum gap is invariant under a time shift") {
  const int n = 6;
  const AmpParams p{n, 0.28, 0.7};
  const auto d = make_scheme(SchemeKind::RfqaD, n, 8);
  GapOptions o;
  o.resolution = 60;
  const double ref = gap_profile(d, p, o).delta_min;
  for (double t : {50.0, 1234.5}) {
    o.t = t;
    CHECK(gap_profile(d, p, o).delta_min == doctest::Approx(ref).epsilon(1e-9));
  }
}

TEST_CASE("multiphoton rate") {
  CHECK(multiphoton_rate(0.3, 2.0, 0.0, 12) == doctest::Approx(0.045));
  CHECK(multiphoton_rate(0.3, 2.0, 0.5, 1) == doctest::Approx(0.045 * 1.5));
  CHECK(multiphoton_rate(0.3, 2.0, 0.3, 12) == doctest::Approx(multiphoton_rate_sum(0.3, 2.0, 0.3, 12)).epsilon(1e-12));
  CHECK_THROWS_AS(multiphoton_rate(0.3, 0.0, 0.3, 4), InvalidInput);
  CHECK_THROWS_AS(multiphoton_rate(0.3, 1.0, -0.3, 4), InvalidInput);
}
