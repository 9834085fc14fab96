#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "amp/cli.hpp"
#include "amp/errors.hpp"
#include "amp/experiments.hpp"

using namespace amp;

namespace {

std::string body(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, out;
  while (std::getline(in, line))
    if (line.empty() || line[0] != '#') out += line + "\n";
  return out;
}

RunConfig small_config() {
  std::istringstream in(R"(
    # tiny study
    sets = hardest, easiest
    schemes = uniform, rfqa-m
    n_range = 4:7
    draws = 3
    seed = 42
    t_f = 40
  )");
  return RunConfig::parse(in);
}

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "ampsim");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST_CASE("fit_exponential is exact on synthetic exponentials") {
  std::vector<std::pair<int, double>> pts;
  for (int n = 5; n <= 12; ++n) pts.emplace_back(n, std::exp2(1.0 + 0.5 * n));
  const auto f = fit_exponential(pts);
  CHECK(f.beta == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.gamma == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(f.residual < 1e-12);
  CHECK(f(8) == doctest::Approx(32.0));
  CHECK(f.n_range.size() == 8);

  pts.clear();
  for (int n = 3; n <= 9; ++n) pts.emplace_back(n, std::exp2(-2.04 - 0.31 * n));
  CHECK(fit_exponential(pts).gamma == doctest::Approx(-0.31).epsilon(1e-12));
}

TEST_CASE("fit_exponential preconditions") {
  CHECK_THROWS_AS(fit_exponential({{1, 1.0}, {2, 2.0}, {3, 4.0}}), InvalidInput);
  CHECK_THROWS_AS(fit_exponential({{1, 1.0}, {2, 2.0}, {3, 0.0}, {4, 8.0}}), InvalidInput);
  CHECK_THROWS_AS(fit_exponential({{1, 1.0}, {2, -2.0}, {3, 4.0}, {4, 8.0}}), InvalidInput);
  CHECK_THROWS_AS(fit_exponential({{1, 1.0}, {2, INFINITY}, {3, 4.0}, {4, 8.0}}), InvalidInput);
  CHECK_THROWS_AS(fit_exponential({{2, 1.0}, {2, 2.0}, {2, 4.0}, {2, 8.0}}), InvalidInput);
}

TEST_CASE("N range parsing") {
  CHECK(parse_n_range("5:12").lo == 5);
  CHECK(parse_n_range("5-12").hi == 12);
  CHECK(parse_n_range("7").values() == std::vector<int>{7});
  CHECK_THROWS_AS(parse_n_range("9:5"), InvalidInput);
  CHECK_THROWS_AS(parse_n_range("a:b"), InvalidInput);
}

TEST_CASE("run config parsing") {
  const auto c = small_config();
  CHECK(c.selected_sets().size() == 2);
  CHECK(c.schemes.size() == 2);
  CHECK(c.n_range_for(SchemeKind::RfqaM).hi == 7);
  CHECK(c.draws_for(SchemeKind::Uniform) == 1);
  CHECK(c.draws_for(SchemeKind::RfqaM) == 3);
  CHECK(c.evolution.t_f == 40.0);

  RunConfig d;
  d.set("draws.mixed", "16");
  d.set("set.custom", "0.25, 0.75");
  d.set("band", "0.001, 0.002");
  d.set("kappa", "0.2");
  CHECK(d.draws_for(SchemeKind::CouplerMixed) == 16);
  CHECK(d.ensemble.find("custom").xp == 0.75);
  CHECK(d.scheme.band->f_max == 0.002);
  CHECK(d.to_json()["scheme_options"]["kappa"] == 0.2);

  CHECK_THROWS_AS(d.set("nonsense", "1"), InvalidInput);
  CHECK_THROWS_AS(d.set("draws", "zero"), InvalidInput);
  CHECK_THROWS_AS(d.set("schemes", "uniform, warp"), InvalidInput);
  CHECK_THROWS_AS(d.set("set.bad", "0.2, 0.4"), InvalidInput);
  std::istringstream bad("seed 4\n");
  CHECK_THROWS_AS(RunConfig::parse(bad), InvalidInput);
}

TEST_CASE("CSV quoting") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_field("two\nlines") == "\"two\nlines\"");
}

TEST_CASE("empty scheme list gives an empty study") {
  RunConfig c = small_config();
  c.schemes.clear();
  const auto r = scaling_study(c);
  CHECK(r.cells.empty());
  CHECK(r.fits.empty());
}

TEST_CASE("scaling study is deterministic and self-describing") {
  const auto c = small_config();
  const auto a = scaling_study(c);
  const auto b = scaling_study(c);
  REQUIRE(a.cells.size() == 16);
  std::ostringstream oa, ob;
  write_study_csv(oa, a, c);
  write_study_csv(ob, b, c);
  CHECK(body(oa.str()) == body(ob.str()));
  CHECK(oa.str().rfind("# ", 0) == 0);
  CHECK(body(oa.str()).rfind("set,scheme,N,t_f,p_success,p_stderr,tts,draws,seed,error,scheme_json\n", 0) == 0);

  REQUIRE(a.fits.size() == 4);
  for (const auto& f : a.fits) {
    REQUIRE(f.fit);
    CHECK(f.used == 4);
  }
  const auto summary = study_summary(a, c);
  CHECK(summary["fits"].size() == 4);
  CHECK(summary["schema_version"] == kResultsSchemaVersion);

  // Per-cell seeds do not depend on which other cells are present.
  RunConfig only = c;
  only.sets = {"easiest"};
  only.schemes = {SchemeKind::RfqaM};
  const auto sub = scaling_study(only);
  for (const auto& cell : sub.cells)
    for (const auto& full : a.cells)
      if (full.set == cell.set && full.kind == cell.kind && full.n == cell.n)
        CHECK(full.record->p_success == cell.record->p_success);
}

TEST_CASE("failed cells are recorded and excluded with a warning") {
  std::vector<StudyCell> cells;
  for (int n = 5; n <= 9; ++n) {
    StudyCell c{"x", SchemeKind::Uniform, n, TtsRecord{}, {}};
    c.record->tts = std::exp2(n);
    cells.push_back(c);
  }
  cells[2].record->tts = INFINITY;
  std::vector<std::string> warnings;
  const auto fits = fit_cells(cells, warnings);
  REQUIRE(fits.size() == 1);
  CHECK(fits[0].used == 4);
  CHECK(fits[0].excluded == 1);
  CHECK(fits[0].fit->gamma == doctest::Approx(1.0));
  CHECK(warnings.size() == 1);

  cells[3].record.reset();
  cells[3].error = "boom";
  warnings.clear();
  const auto thin = fit_cells(cells, warnings);
  CHECK_FALSE(thin[0].fit);
  CHECK(!thin[0].reason.empty());
}

TEST_CASE("table one layout") {
  RunConfig c = small_config();
  c.sets = {"easiest"};
  c.draws = 2;
  const auto t = table_one(c);
  REQUIRE(t.columns.size() == 11);
  CHECK(t.columns.front() == "1/Delta^2");
  CHECK(t.columns[1] == "S");
  CHECK(t.columns.back() == "D");
  for (const auto& col : t.columns) CHECK(t.at("easiest", col).gamma.has_value());
  CHECK(t.at("easiest", "M").draws == 2);
  std::ostringstream csv, txt;
  t.write_csv(csv);
  t.write_text(txt);
  CHECK(csv.str().rfind("set,column,gamma,residual,draws,reason\n", 0) == 0);
  CHECK(txt.str().find("SyncMC") != std::string::npos);

  const auto again = table_one(c);
  for (const auto& col : t.columns) CHECK(*again.at("easiest", col).gamma == *t.at("easiest", col).gamma);
}

TEST_CASE("output directory override") {
  setenv("AMP_OUT_DIR", "/tmp/amp-out-test", 1);
  CHECK(output_dir(".") == "/tmp/amp-out-test");
  unsetenv("AMP_OUT_DIR");
  CHECK(output_dir("fallback") == "fallback");
}

TEST_CASE("command-line exit codes") {
  const auto dir = std::filesystem::temp_directory_path() / "ampsim-cli-test";
  std::filesystem::create_directories(dir);
  const auto out = (dir / "dos.csv").string();
  CHECK(cli({"dos", "--n", "10", "--out", out}) == 0);
  std::ifstream f(out);
  int lines = 0;
  for (std::string l; std::getline(f, l);) ++lines;
  CHECK(lines == 12);

  CHECK(cli({}) == 2);
  CHECK(cli({"warp"}) == 2);
  CHECK(cli({"dos", "--bogus"}) == 2);
  CHECK(cli({"gap", "--n", "6", "--scheme", "nope", "--out", (dir / "g.csv").string()}) == 2);
  CHECK(cli({"energy", "--set", "hardest", "--n", "5", "--m", "0.8", "--out", (dir / "e.txt").string()}) == 0);
  CHECK(cli({"scaling", "--set", "easiest", "--scheme", "uniform", "--n-range", "4:7", "--param", "t_f=30", "--out",
             dir.string()}) == 0);
  CHECK(std::filesystem::exists(dir / "scaling.csv"));
  CHECK(std::filesystem::exists(dir / "scaling.json"));
}
