#include "amp/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "amp/errors.hpp"
#include "amp/experiments.hpp"

namespace amp {
namespace {

struct Common {
  std::string config_path;
  std::vector<std::string> params;
  std::optional<std::uint64_t> seed;
  std::string set;
  std::string scheme;
  std::string n_range;
  std::optional<int> n;
  std::optional<int> draws;
  std::string out;

  RunConfig config() const {
    RunConfig cfg = config_path.empty() ? RunConfig{} : RunConfig::load(config_path);
    for (const auto& p : params) {
      const auto eq = p.find('=');
      if (eq == std::string::npos) throw InvalidInput(fmt::format("--param expects key=value, got '{}'", p));
      cfg.set(p.substr(0, eq), p.substr(eq + 1));
    }
    if (seed) cfg.seed = *seed;
    if (!set.empty()) cfg.set("sets", set);
    if (!scheme.empty()) cfg.set("schemes", scheme);
    if (!n_range.empty()) cfg.set("n_range", n_range);
    if (draws) cfg.set("draws", std::to_string(*draws));
    return cfg;
  }

  ParamSet one_set(const RunConfig& cfg) const {
    const auto sets = cfg.selected_sets();
    if (sets.size() != 1 && !set.empty()) throw InvalidInput("this command takes a single --set");
    return sets.front();
  }

  SchemeKind one_scheme(const RunConfig& cfg) const {
    if (cfg.schemes.size() != 1) throw InvalidInput("this command takes a single --scheme");
    return cfg.schemes.front();
  }

  int one_n() const {
    if (n) return *n;
    if (!n_range.empty()) {
      const auto r = parse_n_range(n_range);
      if (r.lo == r.hi) return r.lo;
    }
    throw InvalidInput("this command needs --n");
  }

  NRange range(const RunConfig& cfg, SchemeKind kind) const {
    if (!n_range.empty()) return parse_n_range(n_range);
    if (n) return NRange{*n, *n};
    return cfg.n_range_for(kind);
  }
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config_path, "Run-config file (key = value lines)")->check(CLI::ExistingFile);
  sub->add_option("--param", c.params, "Config override key=value; repeatable");
  sub->add_option("--seed", c.seed, "Base random seed");
  sub->add_option("--set", c.set, "Parameter set name or index; comma list where several are allowed");
  sub->add_option("--scheme", c.scheme, "Scheme name; comma list where several are allowed");
  sub->add_option("--n-range", c.n_range, "Sizes as lo:hi");
  sub->add_option("--n", c.n, "Single spin count")->check(CLI::Range(2, 30));
  sub->add_option("--draws", c.draws, "Random draws per cell")->check(CLI::PositiveNumber);
  sub->add_option("--out", c.out, "Output file (directory for scaling/table1)");
}

/// stdout unless --out names a file.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw InvalidInput(fmt::format("cannot write '{}'", path));
    }
  }
  std::ostream& os() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

std::string out_directory(const Common& c) {
  const std::string dir = c.out.empty() ? output_dir(".") : c.out;
  std::filesystem::create_directories(dir);
  return dir;
}

std::vector<double> grid(int resolution) {
  std::vector<double> s(resolution);
  for (int i = 0; i < resolution; ++i) s[i] = resolution == 1 ? 0.0 : static_cast<double>(i) / (resolution - 1);
  return s;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Asymmetric magnetization problem: annealing simulator and scaling harness", "ampsim"};
  app.require_subcommand(1);
  Common c;

  // dos
  auto* dos = app.add_subcommand("dos", "Density of states C(N,k)/2^N");
  add_common(dos, c);

  // energy
  auto* energy = app.add_subcommand("energy", "Classical energy f(m) on the magnetization grid");
  add_common(energy, c);
  std::optional<double> energy_m;
  energy->add_option("--m", energy_m, "Single magnetization k/N");

  // gap
  auto* gap = app.add_subcommand("gap", "Gap profile E1-E0 over s and its refined minimum");
  add_common(gap, c);
  int resolution = 200;
  double t_eval = 0.0;
  gap->add_option("--resolution", resolution, "Coarse grid points")->check(CLI::Range(3, 100000));
  gap->add_option("--t", t_eval, "Physical time for time-dependent drives")->check(CLI::NonNegativeNumber);

  // forward-gap
  auto* fwd = app.add_subcommand("forward-gap", "Perturbative gap prediction against the exact minimum gap");
  add_common(fwd, c);
  std::string order = "resummed";
  bool uncorrected = false;
  bool numeric = false;
  fwd->add_option("--order", order, "Energy corrections: resummed or second")
      ->check(CLI::IsMember({"resummed", "second"}));
  fwd->add_flag("--uncorrected", uncorrected, "Drop the 2 pi / N factor");
  fwd->add_flag("--numeric", numeric, "Also compute the exact minimum gap and the ratio");

  // levels
  auto* levels = app.add_subcommand("levels", "E_k - E_0 for the lowest levels over s");
  add_common(levels, c);
  int level_count = 20;
  levels->add_option("--levels", level_count, "Number of excited levels")->check(CLI::Range(1, 200));
  levels->add_option("--resolution", resolution, "Grid points")->check(CLI::Range(3, 100000));
  levels->add_option("--t", t_eval, "Physical time")->check(CLI::NonNegativeNumber);

  // overlaps
  auto* overlaps = app.add_subcommand("overlaps", "Ground and first excited state weight on all-up / all-down");
  add_common(overlaps, c);
  overlaps->add_option("--resolution", resolution, "Grid points")->check(CLI::Range(2, 100000));
  overlaps->add_option("--t", t_eval, "Physical time")->check(CLI::NonNegativeNumber);

  // evolve
  auto* evolve = app.add_subcommand("evolve", "Single anneal; prints success probability and diagnostics");
  add_common(evolve, c);
  std::string state_path;
  evolve->add_option("--dump-state", state_path, "Write the final full-register state as CSV");

  // tts
  auto* tts_cmd = app.add_subcommand("tts", "Draw-averaged time to solution at one size");
  add_common(tts_cmd, c);

  // scaling
  auto* scaling = app.add_subcommand("scaling", "TTS scaling study over sets, schemes and sizes");
  add_common(scaling, c);

  // table1
  auto* table = app.add_subcommand("table1", "Fitted exponent for every method column and set");
  add_common(table, c);

  // fit
  auto* fit = app.add_subcommand("fit", "Fit value(N) = 2^(beta + gamma N) to 'N,value' rows");
  add_common(fit, c);
  std::string fit_in;
  fit->add_option("--in", fit_in, "Input CSV (stdin if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const RunConfig cfg = c.config();
    Sink sink(app.got_subcommand(scaling) || app.got_subcommand(table) ? std::string{} : c.out);
    std::ostream& os = sink.os();
    os.precision(17);

    if (app.got_subcommand(dos)) {
      const int n = c.one_n();
      const auto w = density_of_states(n);
      os << "m,weight\n";
      for (int k = 0; k <= n; ++k) os << fmt::format("{},{}\n", static_cast<double>(k) / n, w[k]);
      return 0;
    }

    if (app.got_subcommand(energy)) {
      const auto p = c.one_set(cfg).with_n(c.one_n());
      p.validate();
      if (energy_m) {
        os << fmt::format("{}\n", classical_energy(p, *energy_m));
      } else {
        os << "k,m,energy\n";
        for (int k = 0; k <= p.n; ++k)
          os << fmt::format("{},{},{}\n", k, static_cast<double>(k) / p.n, sector_energy(p, k));
      }
      return 0;
    }

    if (app.got_subcommand(gap)) {
      const auto p = c.one_set(cfg).with_n(c.one_n());
      const auto kind = c.one_scheme(cfg);
      GapOptions go = cfg.gap;
      go.resolution = resolution;
      go.t = t_eval;
      const auto prof = gap_profile(make_scheme(kind, p.n, cfg.seed, cfg.scheme), p, go);
      os << "s,gap\n";
      for (std::size_t i = 0; i < prof.s_grid.size(); ++i) os << fmt::format("{},{}\n", prof.s_grid[i], prof.gaps[i]);
      os << fmt::format("# delta_min,{},s_min,{}\n", prof.delta_min, prof.s_min);
      return 0;
    }

    if (app.got_subcommand(fwd)) {
      const auto ord = order == "second" ? CorrectionOrder::SecondOrder : CorrectionOrder::Resummed;
      os << "set,N,kappa_c,forward_gap,forward_gap_sweep" << (numeric ? ",delta_min,ratio" : "") << '\n';
      for (const auto& set : cfg.selected_sets()) {
        for (const int n : c.range(cfg, SchemeKind::Uniform).values()) {
          const auto p = set.with_n(n);
          const double kc = critical_kappa(p, ord);
          const double fg = forward_gap(p, kc, !uncorrected);
          const double fs = forward_gap_sweep_units(p, kc, !uncorrected);
          os << fmt::format("{},{},{},{},{}", csv_field(set.name), n, kc, fg, fs);
          if (numeric) {
            const double d = gap_profile(Uniform{}, p, cfg.gap).delta_min;
            os << fmt::format(",{},{}", d, fs / d);
          }
          os << '\n';
        }
      }
      return 0;
    }

    if (app.got_subcommand(levels)) {
      const auto p = c.one_set(cfg).with_n(c.one_n());
      GapOptions go = cfg.gap;
      go.resolution = resolution;
      go.t = t_eval;
      const auto d = level_diagram(make_scheme(c.one_scheme(cfg), p.n, cfg.seed, cfg.scheme), p, level_count, go);
      os << 's';
      for (int k = 1; k <= level_count; ++k) os << ",E" << k << "-E0";
      os << '\n';
      for (std::size_t i = 0; i < d.s_grid.size(); ++i) {
        os << fmt::format("{}", d.s_grid[i]);
        for (double v : d.differences[i]) os << fmt::format(",{}", v);
        os << '\n';
      }
      std::vector<double> first;
      for (const auto& row : d.differences) first.push_back(row.front());
      const auto minima = local_minima(first);
      os << "# gap_local_minima";
      for (auto i : minima) os << fmt::format(",{}", d.s_grid[i]);
      os << '\n';
      return 0;
    }

    if (app.got_subcommand(overlaps)) {
      const auto p = c.one_set(cfg).with_n(c.one_n());
      const auto tr = overlap_trace(make_scheme(c.one_scheme(cfg), p.n, cfg.seed, cfg.scheme), p, grid(resolution),
                                    t_eval, cfg.gap.spectrum);
      os << "s,ground_up,ground_down,excited_up,excited_down\n";
      for (std::size_t i = 0; i < tr.s_grid.size(); ++i)
        os << fmt::format("{},{},{},{},{}\n", tr.s_grid[i], tr.ground_up[i], tr.ground_down[i], tr.excited_up[i],
                          tr.excited_down[i]);
      return 0;
    }

    if (app.got_subcommand(evolve)) {
      const auto p = c.one_set(cfg).with_n(c.one_n());
      const auto scheme = make_scheme(c.one_scheme(cfg), p.n, cfg.seed, cfg.scheme);
      const auto fs = integrate(scheme, p, cfg.evolution);
      const double ps = fs.success_probability();
      nlohmann::json j{{"set", c.one_set(cfg).name},
                       {"n", p.n},
                       {"scheme", to_json(scheme)},
                       {"t_f", fs.t_f},
                       {"steps", fs.steps},
                       {"norm_drift", fs.norm_drift},
                       {"representation", fs.symmetric ? "symmetric" : "full"},
                       {"p_success", ps}};
      const double t = tts(fs.t_f, ps);
      j["tts"] = std::isfinite(t) ? nlohmann::json(t) : nlohmann::json("inf");
      os << j.dump(2) << '\n';
      if (!state_path.empty()) {
        std::ofstream st(state_path);
        if (!st) throw InvalidInput(fmt::format("cannot write '{}'", state_path));
        const auto full = fs.full ? *fs.full : embed(*fs.symmetric);
        write_state_csv(st, full.amp);
      }
      return 0;
    }

    if (app.got_subcommand(tts_cmd)) {
      const auto set = c.one_set(cfg);
      const auto kind = c.one_scheme(cfg);
      auto rec = averaged_tts(kind, set.with_n(c.one_n()), cfg.evolution, cfg.draws_for(kind), cfg.seed, cfg.scheme);
      rec.set = set.name;
      os << rec.to_json().dump(2) << '\n';
      return 0;
    }

    if (app.got_subcommand(scaling)) {
      const auto dir = out_directory(c);
      const auto result = scaling_study(cfg);
      {
        std::ofstream f(dir + "/scaling.csv");
        write_study_csv(f, result, cfg);
      }
      {
        std::ofstream f(dir + "/scaling.json");
        f << study_summary(result, cfg).dump(2) << '\n';
      }
      for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
      std::cout << "set,scheme,gamma,beta,residual,used,excluded\n";
      for (const auto& f : result.fits) {
        if (f.fit)
          std::cout << fmt::format("{},{},{:.4f},{:.4f},{:.4f},{},{}\n", csv_field(f.set), to_string(f.kind),
                                   f.fit->gamma, f.fit->beta, f.fit->residual, f.used, f.excluded);
        else
          std::cout << fmt::format("{},{},,,,{},{}\n", csv_field(f.set), to_string(f.kind), f.used, f.excluded);
      }
      return 0;
    }

    if (app.got_subcommand(table)) {
      const auto dir = out_directory(c);
      const auto t1 = table_one(cfg);
      {
        std::ofstream f(dir + "/table1.csv");
        t1.write_csv(f);
      }
      {
        std::ofstream f(dir + "/table1.txt");
        t1.write_text(f);
      }
      {
        std::ofstream f(dir + "/table1_cells.csv");
        write_study_csv(f, t1.study, cfg);
      }
      {
        std::ofstream f(dir + "/table1.json");
        f << study_summary(t1.study, cfg).dump(2) << '\n';
      }
      for (const auto& w : t1.study.warnings) std::cerr << "warning: " << w << '\n';
      t1.write_text(std::cout);
      return 0;
    }

    if (app.got_subcommand(fit)) {
      std::ifstream file;
      std::istream* in = &std::cin;
      if (!fit_in.empty()) {
        file.open(fit_in);
        if (!file) throw InvalidInput(fmt::format("cannot open '{}'", fit_in));
        in = &file;
      }
      std::vector<std::pair<int, double>> pts;
      std::string line;
      while (std::getline(*in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::stringstream ss(line);
        std::string a, b;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',')) continue;
        try {
          std::size_t used = 0;
          const int n = std::stoi(a, &used);
          if (used != a.size()) continue;
          pts.emplace_back(n, std::stod(b));
        } catch (const std::exception&) {
          continue;  // header or text row
        }
      }
      os << fit_exponential(pts).to_json().dump(2) << '\n';
      return 0;
    }
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace amp
