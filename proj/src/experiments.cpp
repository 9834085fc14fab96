#include "amp/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <mutex>
#include <sstream>

#include <fmt/chrono.h>
#include <fmt/format.h>

#include "amp/errors.hpp"
#include "amp/parallel.hpp"

namespace amp {
namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end || !std::isfinite(out))
    throw InvalidInput(fmt::format("{}: '{}' is not a finite number", key, v));
  return out;
}

template <class Int>
Int to_int(const std::string& key, const std::string& v) {
  Int out = 0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) throw InvalidInput(fmt::format("{}: '{}' is not an integer", key, v));
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw InvalidInput(fmt::format("{}: '{}' is not a boolean", key, v));
}

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  return fmt::format("{}", v);
}

nlohmann::json num_json(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(num(v)); }

std::string timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(now));
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

constexpr const char* kGapColumn = "1/Delta^2";

}  // namespace

// --------------------------------------------------------------------------
// Fitting
// --------------------------------------------------------------------------

double ScalingFit::operator()(int n) const { return std::exp2(beta + gamma * n); }

nlohmann::json ScalingFit::to_json() const {
  return {{"beta", beta}, {"gamma", gamma}, {"residual", residual}, {"n_range", n_range}};
}

ScalingFit fit_exponential(const std::vector<std::pair<int, double>>& points) {
  if (points.size() < 4) throw InvalidInput(fmt::format("need at least 4 points to fit, got {}", points.size()));
  for (const auto& [n, v] : points)
    if (!(v > 0.0) || !std::isfinite(v))
      throw InvalidInput(fmt::format("value {} at N = {} is not positive and finite", v, n));

  const double m = static_cast<double>(points.size());
  double mx = 0.0, my = 0.0;
  for (const auto& [n, v] : points) {
    mx += n;
    my += std::log2(v);
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [n, v] : points) {
    sxx += (n - mx) * (n - mx);
    sxy += (n - mx) * (std::log2(v) - my);
  }
  if (sxx == 0.0) throw InvalidInput("all points share the same N");

  ScalingFit fit;
  fit.gamma = sxy / sxx;
  fit.beta = my - fit.gamma * mx;
  double ss = 0.0;
  for (const auto& [n, v] : points) {
    const double r = std::log2(v) - (fit.beta + fit.gamma * n);
    ss += r * r;
    fit.n_range.push_back(n);
  }
  fit.residual = std::sqrt(ss / m);
  return fit;
}

// --------------------------------------------------------------------------
// Configuration
// --------------------------------------------------------------------------

std::vector<int> NRange::values() const {
  std::vector<int> out;
  for (int n = lo; n <= hi; ++n) out.push_back(n);
  return out;
}

NRange parse_n_range(const std::string& text) {
  const std::string t = trim(text);
  const auto sep = t.find_first_of(":-", 1);
  NRange r;
  if (sep == std::string::npos) {
    r.lo = r.hi = to_int<int>("n-range", t);
  } else {
    r.lo = to_int<int>("n-range", trim(t.substr(0, sep)));
    r.hi = to_int<int>("n-range", trim(t.substr(sep + 1)));
  }
  if (r.lo < 2 || r.hi < r.lo) throw InvalidInput(fmt::format("invalid N range '{}'", text));
  return r;
}

void RunConfig::set(const std::string& raw_key, const std::string& raw_value) {
  const std::string key = trim(raw_key);
  const std::string v = trim(raw_value);

  if (key.rfind("draws.", 0) == 0) {
    const int d = to_int<int>(key, v);
    if (d < 1) throw InvalidInput(fmt::format("{} must be at least 1", key));
    draws_override[parse_scheme_kind(key.substr(6))] = d;
    return;
  }
  if (key.rfind("set.", 0) == 0) {
    // set.<name> = a, xp
    const auto parts = split(v, ',');
    if (parts.size() != 2) throw InvalidInput(fmt::format("{} expects 'a, xp'", key));
    ParamSet ps{key.substr(4), to_double(key, parts[0]), to_double(key, parts[1])};
    ps.with_n(2).validate();
    auto it = std::find_if(ensemble.sets.begin(), ensemble.sets.end(), [&](const ParamSet& s) { return s.name == ps.name; });
    if (it != ensemble.sets.end())
      *it = ps;
    else
      ensemble.sets.push_back(ps);
    return;
  }

  if (key == "sets") {
    sets = split(v, ',');
    for (const auto& s : sets) ensemble.find(s);
  } else if (key == "schemes") {
    schemes.clear();
    if (v == "all") {
      schemes = all_scheme_kinds();
    } else {
      for (const auto& s : split(v, ',')) schemes.push_back(parse_scheme_kind(s));
    }
  } else if (key == "n_range") {
    n_symmetric = n_full = parse_n_range(v);
  } else if (key == "n_range_symmetric") {
    n_symmetric = parse_n_range(v);
  } else if (key == "n_range_full") {
    n_full = parse_n_range(v);
  } else if (key == "draws") {
    draws = to_int<int>(key, v);
    if (draws < 1) throw InvalidInput("draws must be at least 1");
  } else if (key == "seed") {
    seed = to_int<std::uint64_t>(key, v);
  } else if (key == "t_f") {
    evolution.t_f = to_double(key, v);
  } else if (key == "runtime_c") {
    evolution.runtime.c = to_double(key, v);
  } else if (key == "runtime_p") {
    evolution.runtime.p = to_double(key, v);
  } else if (key == "max_dt") {
    evolution.max_dt = to_double(key, v);
    if (!(evolution.max_dt > 0.0)) throw InvalidInput("max_dt must be positive");
  } else if (key == "steps_per_period") {
    evolution.steps_per_period = to_int<int>(key, v);
    if (evolution.steps_per_period < 1) throw InvalidInput("steps_per_period must be at least 1");
  } else if (key == "norm_tol") {
    evolution.norm_tol = to_double(key, v);
  } else if (key == "integrator") {
    if (v == "magnus4")
      evolution.integrator = Integrator::Magnus4;
    else if (v == "rk4")
      evolution.integrator = Integrator::Rk4;
    else
      throw InvalidInput(fmt::format("unknown integrator '{}'", v));
  } else if (key == "krylov_tol") {
    evolution.krylov_tol = to_double(key, v);
  } else if (key == "renormalize") {
    evolution.renormalize = to_bool(key, v);
  } else if (key == "full_space_cap") {
    evolution.full_space_cap = to_int<int>(key, v);
    gap.spectrum.full_space_cap = evolution.full_space_cap;
  } else if (key == "r") {
    scheme.r = to_double(key, v);
  } else if (key == "alpha_bar") {
    scheme.alpha_bar = to_double(key, v);
  } else if (key == "kappa") {
    scheme.kappa = to_double(key, v);
  } else if (key == "kappa_r") {
    scheme.kappa_r = to_double(key, v);
  } else if (key == "band") {
    const auto parts = split(v, ',');
    if (parts.size() != 2) throw InvalidInput("band expects 'f_min, f_max'");
    scheme.band = FrequencyBand{to_double(key, parts[0]), to_double(key, parts[1])};
  } else if (key == "sync_groups") {
    scheme.sync_groups = to_int<int>(key, v);
  } else if (key == "s_pause_min") {
    scheme.s_pause_min = to_double(key, v);
  } else if (key == "s_pause_max") {
    scheme.s_pause_max = to_double(key, v);
  } else if (key == "dwell_c") {
    scheme.dwell_c = to_double(key, v);
  } else if (key == "gap_resolution") {
    gap.resolution = to_int<int>(key, v);
  } else if (key == "gap_s_tol") {
    gap.s_tol = to_double(key, v);
  } else if (key == "out_dir") {
    out_dir = v;
  } else {
    throw InvalidInput(fmt::format("unknown config key '{}'", key));
  }
}

RunConfig RunConfig::parse(std::istream& in) {
  RunConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw InvalidInput(fmt::format("config line {}: expected 'key = value'", lineno));
    try {
      cfg.set(line.substr(0, eq), line.substr(eq + 1));
    } catch (const InvalidInput& e) {
      throw InvalidInput(fmt::format("config line {}: {}", lineno, e.what()));
    }
  }
  return cfg;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput(fmt::format("cannot open config file '{}'", path));
  return parse(in);
}

std::vector<ParamSet> RunConfig::selected_sets() const {
  if (sets.empty()) return ensemble.sets;
  std::vector<ParamSet> out;
  for (const auto& s : sets) out.push_back(ensemble.find(s));
  return out;
}

bool runs_symmetric(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::Uniform:
    case SchemeKind::CouplerFerro:
    case SchemeKind::CouplerAntiferro:
    case SchemeKind::ReverseAnneal: return true;
    default: return false;
  }
}

NRange RunConfig::n_range_for(SchemeKind kind) const { return runs_symmetric(kind) ? n_symmetric : n_full; }

int RunConfig::draws_for(SchemeKind kind) const {
  if (!is_randomized(kind)) return 1;
  const auto it = draws_override.find(kind);
  return it != draws_override.end() ? it->second : draws;
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j;
  j["schema_version"] = kResultsSchemaVersion;
  nlohmann::json ens = nlohmann::json::array();
  for (const auto& s : ensemble.sets) ens.push_back({{"name", s.name}, {"a", s.a}, {"xp", s.xp}});
  j["ensemble"] = ens;
  j["sets"] = sets;
  nlohmann::json sch = nlohmann::json::array();
  for (auto k : schemes) sch.push_back(to_string(k));
  j["schemes"] = sch;
  j["n_range_symmetric"] = {n_symmetric.lo, n_symmetric.hi};
  j["n_range_full"] = {n_full.lo, n_full.hi};
  j["draws"] = draws;
  nlohmann::json over = nlohmann::json::object();
  for (const auto& [k, d] : draws_override) over[to_string(k)] = d;
  j["draws_override"] = over;
  j["seed"] = seed;
  j["evolution"] = {{"t_f", evolution.t_f},
                    {"runtime_c", evolution.runtime.c},
                    {"runtime_p", evolution.runtime.p},
                    {"max_dt", evolution.max_dt},
                    {"steps_per_period", evolution.steps_per_period},
                    {"norm_tol", evolution.norm_tol},
                    {"integrator", evolution.integrator == Integrator::Magnus4 ? "magnus4" : "rk4"},
                    {"krylov_tol", evolution.krylov_tol},
                    {"renormalize", evolution.renormalize},
                    {"full_space_cap", evolution.full_space_cap}};
  nlohmann::json so{{"r", scheme.r},
                    {"alpha_bar", scheme.alpha_bar},
                    {"sync_groups", scheme.sync_groups},
                    {"s_pause_min", scheme.s_pause_min},
                    {"s_pause_max", scheme.s_pause_max},
                    {"dwell_c", scheme.dwell_c}};
  so["kappa"] = scheme.kappa ? nlohmann::json(*scheme.kappa) : nlohmann::json("1/N");
  so["kappa_r"] = scheme.kappa_r ? nlohmann::json(*scheme.kappa_r) : nlohmann::json("1/N^2");
  so["band"] = scheme.band ? nlohmann::json({scheme.band->f_min, scheme.band->f_max})
                           : nlohmann::json("[0.01, 0.02] / N^1.5");
  j["scheme_options"] = so;
  j["gap"] = {{"resolution", gap.resolution}, {"s_tol", gap.s_tol}};
  return j;
}

std::string output_dir(const std::string& fallback) {
  if (const char* env = std::getenv("AMP_OUT_DIR"); env && *env) return env;
  return fallback;
}

// --------------------------------------------------------------------------
// Scaling study
// --------------------------------------------------------------------------

const FitEntry* StudyResult::find_fit(const std::string& set, SchemeKind kind) const {
  for (const auto& f : fits)
    if (f.set == set && f.kind == kind) return &f;
  return nullptr;
}

std::vector<FitEntry> fit_cells(const std::vector<StudyCell>& cells, std::vector<std::string>& warnings) {
  std::vector<FitEntry> fits;
  std::vector<std::vector<std::pair<int, double>>> points;
  for (const auto& c : cells) {
    auto it = std::find_if(fits.begin(), fits.end(), [&](const FitEntry& f) { return f.set == c.set && f.kind == c.kind; });
    if (it == fits.end()) {
      fits.push_back(FitEntry{c.set, c.kind, std::nullopt, 0, 0, {}});
      points.emplace_back();
      it = fits.end() - 1;
    }
    auto& pts = points[static_cast<std::size_t>(it - fits.begin())];
    if (c.record && std::isfinite(c.record->tts) && c.record->tts > 0.0) {
      pts.emplace_back(c.n, c.record->tts);
      ++it->used;
    } else {
      ++it->excluded;
    }
  }

  for (std::size_t i = 0; i < fits.size(); ++i) {
    auto& f = fits[i];
    const int total = f.used + f.excluded;
    if (f.excluded > 0 && 10 * f.excluded > total)
      warnings.push_back(fmt::format("{} / {}: {} of {} cells excluded from the fit", f.set, to_string(f.kind),
                                     f.excluded, total));
    if (f.used < 4) {
      f.reason = fmt::format("only {} usable sizes", f.used);
      continue;
    }
    f.fit = fit_exponential(points[i]);
  }
  return fits;
}

StudyResult scaling_study(const RunConfig& config) {
  StudyResult result;
  for (const auto& set : config.selected_sets())
    for (const auto kind : config.schemes)
      for (const int n : config.n_range_for(kind).values()) result.cells.push_back(StudyCell{set.name, kind, n, {}, {}});
  if (result.cells.empty()) return result;

  const auto sets = config.selected_sets();
  auto params_of = [&](const std::string& name, int n) {
    for (const auto& s : sets)
      if (s.name == name) return s.with_n(n);
    throw ContractViolation("unknown set in study cell");
  };

  parallel_for(result.cells.size(), [&](std::size_t i) {
    auto& cell = result.cells[i];
    // Each cell gets its own stream so that adding sizes or schemes does not
    // shift the draws of the others.
    const std::uint64_t cell_seed =
        derive_seed(derive_seed(derive_seed(config.seed, fnv1a(cell.set)),
                                static_cast<std::uint64_t>(cell.kind)),
                    static_cast<std::uint64_t>(cell.n));
    try {
      auto rec = averaged_tts(cell.kind, params_of(cell.set, cell.n), config.evolution, config.draws_for(cell.kind),
                              cell_seed, config.scheme);
      rec.set = cell.set;
      cell.record = std::move(rec);
    } catch (const std::exception& e) {
      cell.error = e.what();
    }
  });

  for (const auto& c : result.cells)
    if (!c.error.empty())
      result.warnings.push_back(fmt::format("{} / {} / N={}: {}", c.set, to_string(c.kind), c.n, c.error));
  result.fits = fit_cells(result.cells, result.warnings);
  return result;
}

std::string csv_field(const std::string& value) {
  if (value.find_first_of(",\"\r\n") == std::string::npos) return value;
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_study_csv(std::ostream& os, const StudyResult& result, const RunConfig& config) {
  os << "# ampsim scaling study, schema " << kResultsSchemaVersion << '\n';
  os << "# generated " << timestamp() << '\n';
  os << "# config " << config.to_json().dump() << '\n';
  os << "set,scheme,N,t_f,p_success,p_stderr,tts,draws,seed,error,scheme_json\n";
  for (const auto& c : result.cells) {
    os << csv_field(c.set) << ',' << to_string(c.kind) << ',' << c.n << ',';
    if (c.record) {
      const auto& r = *c.record;
      os << num(r.t_f) << ',' << num(r.p_success) << ',' << num(r.p_stderr) << ',' << num(r.tts) << ','
         << r.draw_p.size() << ',' << r.seed << ",," << csv_field(r.to_json().dump()) << '\n';
    } else {
      os << ",,,,,," << csv_field(c.error) << ",\n";
    }
  }
}

nlohmann::json study_summary(const StudyResult& result, const RunConfig& config) {
  nlohmann::json j;
  j["schema_version"] = kResultsSchemaVersion;
  j["generated"] = timestamp();
  j["config"] = config.to_json();
  nlohmann::json fits = nlohmann::json::array();
  for (const auto& f : result.fits) {
    nlohmann::json e{{"set", f.set},
                     {"scheme", to_string(f.kind)},
                     {"label", table_label(f.kind)},
                     {"used", f.used},
                     {"excluded", f.excluded}};
    e["fit"] = f.fit ? f.fit->to_json() : nlohmann::json(nullptr);
    if (!f.reason.empty()) e["reason"] = f.reason;
    fits.push_back(std::move(e));
  }
  j["fits"] = fits;
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : result.cells) {
    nlohmann::json e{{"set", c.set}, {"scheme", to_string(c.kind)}, {"n", c.n}};
    if (c.record) {
      e["t_f"] = c.record->t_f;
      e["p_success"] = c.record->p_success;
      e["p_stderr"] = c.record->p_stderr;
      e["tts"] = num_json(c.record->tts);
      e["draws"] = c.record->draw_p.size();
      e["seed"] = c.record->seed;
    } else {
      e["error"] = c.error;
    }
    cells.push_back(std::move(e));
  }
  j["cells"] = cells;
  j["warnings"] = result.warnings;
  return j;
}

// --------------------------------------------------------------------------
// Gap scaling and the method table
// --------------------------------------------------------------------------

GapScaling gap_scaling(const ParamSet& set, const NRange& range, const GapOptions& opts) {
  GapScaling out;
  out.set = set.name;
  for (const int n : range.values())
    out.delta_min.emplace_back(n, gap_profile(Uniform{}, set.with_n(n), opts).delta_min);
  out.fit = fit_exponential(out.delta_min);
  return out;
}

const TableCell& TableOne::at(const std::string& set, const std::string& column) const {
  const auto si = std::find(sets.begin(), sets.end(), set);
  const auto ci = std::find(columns.begin(), columns.end(), column);
  if (si == sets.end() || ci == columns.end())
    throw InvalidInput(fmt::format("no table cell ({}, {})", set, column));
  return cells[static_cast<std::size_t>(si - sets.begin())][static_cast<std::size_t>(ci - columns.begin())];
}

void TableOne::write_csv(std::ostream& os) const {
  os << "set,column,gamma,residual,draws,reason\n";
  for (std::size_t s = 0; s < sets.size(); ++s)
    for (std::size_t c = 0; c < columns.size(); ++c) {
      const auto& cell = cells[s][c];
      os << csv_field(sets[s]) << ',' << csv_field(columns[c]) << ',' << (cell.gamma ? num(*cell.gamma) : "")
         << ',' << (cell.gamma ? num(cell.residual) : "") << ',' << cell.draws << ',' << csv_field(cell.reason)
         << '\n';
  }
}

void TableOne::write_text(std::ostream& os) const {
  std::size_t set_w = 3;
  for (const auto& s : sets) set_w = std::max(set_w, s.size());
  std::vector<std::size_t> w(columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) w[c] = std::max<std::size_t>(columns[c].size(), 5);

  os << fmt::format("{:<{}}", "set", set_w);
  for (std::size_t c = 0; c < columns.size(); ++c) os << fmt::format("  {:>{}}", columns[c], w[c]);
  os << '\n';
  for (std::size_t s = 0; s < sets.size(); ++s) {
    os << fmt::format("{:<{}}", sets[s], set_w);
    for (std::size_t c = 0; c < columns.size(); ++c) {
      const auto& cell = cells[s][c];
      os << fmt::format("  {:>{}}", cell.gamma ? fmt::format("{:.2f}", *cell.gamma) : std::string("-"), w[c]);
    }
    os << '\n';
  }
  for (std::size_t s = 0; s < sets.size(); ++s)
    for (std::size_t c = 0; c < columns.size(); ++c)
      if (!cells[s][c].gamma) os << fmt::format("# {} / {}: {}\n", sets[s], columns[c], cells[s][c].reason);
}

TableOne table_one(const RunConfig& config) {
  RunConfig cfg = config;
  cfg.schemes.clear();
  for (auto k : all_scheme_kinds())
    if (k != SchemeKind::ReverseAnneal) cfg.schemes.push_back(k);

  TableOne table;
  for (const auto& s : cfg.selected_sets()) table.sets.push_back(s.name);
  table.columns.push_back(kGapColumn);
  for (auto k : cfg.schemes) table.columns.push_back(table_label(k));

  table.study = scaling_study(cfg);
  const auto sets = cfg.selected_sets();
  std::vector<std::optional<GapScaling>> gaps(sets.size());
  std::vector<std::string> gap_errors(sets.size());
  parallel_for(sets.size(), [&](std::size_t i) {
    try {
      gaps[i] = gap_scaling(sets[i], cfg.n_range_for(SchemeKind::Uniform), cfg.gap);
    } catch (const std::exception& e) {
      gap_errors[i] = e.what();
    }
  });

  for (std::size_t s = 0; s < sets.size(); ++s) {
    std::vector<TableCell> row;
    TableCell gap_cell;
    if (gaps[s]) {
      std::vector<std::pair<int, double>> inv;
      for (const auto& [n, d] : gaps[s]->delta_min) inv.emplace_back(n, 1.0 / (d * d));
      const auto fit = fit_exponential(inv);
      gap_cell.gamma = fit.gamma;
      gap_cell.residual = fit.residual;
    } else {
      gap_cell.reason = gap_errors[s];
    }
    row.push_back(gap_cell);

    for (auto k : cfg.schemes) {
      TableCell cell;
      cell.draws = cfg.draws_for(k);
      const FitEntry* f = table.study.find_fit(sets[s].name, k);
      if (f && f->fit) {
        cell.gamma = f->fit->gamma;
        cell.residual = f->fit->residual;
      } else {
        cell.reason = f ? f->reason : "not run";
      }
      row.push_back(cell);
    }
    table.cells.push_back(std::move(row));
  }
  return table;
}

}  // namespace amp
