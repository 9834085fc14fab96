#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "amp/evolve.hpp"
#include "amp/spectrum.hpp"

namespace amp {

inline constexpr int kResultsSchemaVersion = 1;

/// value(N) = 2^(beta + gamma N), fitted by least squares on log2(value).
struct ScalingFit {
  double beta = 0.0;
  double gamma = 0.0;
  double residual = 0.0;  ///< RMS of the log2 residuals
  std::vector<int> n_range;

  double operator()(int n) const;
  nlohmann::json to_json() const;
};

/// Needs at least four points with distinct N and strictly positive finite values.
ScalingFit fit_exponential(const std::vector<std::pair<int, double>>& points);

/// Inclusive N range.
struct NRange {
  int lo = 5;
  int hi = 12;

  std::vector<int> values() const;
};

/// Parses "5:12" or "5-12"; a single number gives a one-point range.
NRange parse_n_range(const std::string& text);

/// Everything a scaling study depends on. Text form is one `key = value` per
/// line with `#` comments; see README for the key list.
struct RunConfig {
  DifficultyEnsemble ensemble = DifficultyEnsemble::standard();
  std::vector<std::string> sets;  ///< names or indices into the ensemble; empty means all
  std::vector<SchemeKind> schemes{SchemeKind::Uniform};
  NRange n_symmetric{5, 16};  ///< sizes for schemes that run in the Dicke basis
  NRange n_full{5, 12};       ///< sizes for schemes that need the full register
  int draws = 200;
  std::map<SchemeKind, int> draws_override;
  std::uint64_t seed = 1;
  EvolutionConfig evolution;
  SchemeOptions scheme;
  GapOptions gap;
  std::string out_dir = ".";

  /// Applies one key/value pair. Throws InvalidInput for unknown keys or bad values.
  void set(const std::string& key, const std::string& value);
  static RunConfig parse(std::istream& in);
  static RunConfig load(const std::string& path);

  std::vector<ParamSet> selected_sets() const;
  NRange n_range_for(SchemeKind kind) const;
  int draws_for(SchemeKind kind) const;
  nlohmann::json to_json() const;
};

/// AMP_OUT_DIR if set, else `fallback`.
std::string output_dir(const std::string& fallback);

/// True for kinds that evolve in the Dicke basis.
bool runs_symmetric(SchemeKind kind);

struct StudyCell {
  std::string set;
  SchemeKind kind = SchemeKind::Uniform;
  int n = 0;
  std::optional<TtsRecord> record;
  std::string error;  ///< non-empty when the cell failed
};

struct FitEntry {
  std::string set;
  SchemeKind kind = SchemeKind::Uniform;
  std::optional<ScalingFit> fit;
  int used = 0;
  int excluded = 0;
  std::string reason;  ///< why the fit is absent, if it is
};

struct StudyResult {
  std::vector<StudyCell> cells;
  std::vector<FitEntry> fits;
  std::vector<std::string> warnings;

  const FitEntry* find_fit(const std::string& set, SchemeKind kind) const;
};

/// Runs averaged_tts for every (set, scheme, N) cell and fits each
/// (set, scheme) row. A failing cell is recorded and the study continues.
StudyResult scaling_study(const RunConfig& config);

/// Fits the (set, scheme) rows of existing cells; used by scaling_study.
std::vector<FitEntry> fit_cells(const std::vector<StudyCell>& cells, std::vector<std::string>& warnings);

/// Writes the study rows. Lines starting with '#' hold run metadata
/// (including a timestamp); everything after is deterministic.
void write_study_csv(std::ostream& os, const StudyResult& result, const RunConfig& config);
nlohmann::json study_summary(const StudyResult& result, const RunConfig& config);

/// Minimum gaps of the uniform sweep for N in `range` and their fit.
struct GapScaling {
  std::string set;
  std::vector<std::pair<int, double>> delta_min;
  ScalingFit fit;
};

GapScaling gap_scaling(const ParamSet& set, const NRange& range, const GapOptions& opts = {});

struct TableCell {
  std::optional<double> gamma;
  double residual = 0.0;
  int draws = 0;
  std::string reason;
};

/// Fitted exponent per (set, method). The first column is the fit of
/// 1/delta_min^2; the rest are TTS fits, one per scheme kind.
struct TableOne {
  std::vector<std::string> sets;
  std::vector<std::string> columns;
  std::vector<std::vector<TableCell>> cells;  ///< [set][column]
  StudyResult study;

  const TableCell& at(const std::string& set, const std::string& column) const;
  void write_csv(std::ostream& os) const;
  void write_text(std::ostream& os) const;
};

/// Runs every method column; `config.schemes` is ignored.
TableOne table_one(const RunConfig& config);

/// RFC-4180 quoting when the field needs it.
std::string csv_field(const std::string& value);

}  // namespace amp
