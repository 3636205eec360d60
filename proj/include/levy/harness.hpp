#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "levy/besov.hpp"
#include "levy/exponents.hpp"
#include "levy/spectral.hpp"

namespace levy {

inline constexpr const char* kVersion = "0.1.0";

/// One compressibility experiment. Every field has a key of the same name in
/// the configuration file (see README); -1 marks "derive from J".
struct ExperimentConfig {
  std::string family = "gaussian";
  std::map<std::string, double> family_params;
  std::string op = "fractional_laplacian";
  double gamma = 1.0;
  int d = 1;
  int J = 14;
  int k = 4;
  int trials = 20;
  std::uint64_t seed = 1;
  double p0 = 2.0;
  double tau0 = 0.0;
  /// Empty means the dyadic grid {2^2, ..., 2^{Jd-2}}.
  std::vector<std::size_t> n_grid;
  double fit_lo = 16;
  double fit_hi = -1;
  double tolerance = 0.15;
  /// Infinite predictions pass when the median exceeds the Gaussian value by this much.
  double infinite_margin = 0.5;
  bool allow_inadmissible = false;
  std::string output;

  LevyExponent exponent() const;
  GridSpec grid() const { return GridSpec{d, J}; }
  OperatorSymbol symbol() const;
  std::vector<std::size_t> effective_n_grid() const;
  FitRange fit_range() const;
  BesovParams besov() const { return BesovParams{tau0, p0, p0, d}; }
  KappaPrediction prediction() const;

  /// Checks parameter domains and the admissibility gate; throws ConfigError
  /// or AdmissibilityError (naming the violated inequality).
  void validate() const;

  /// key = value text in fixed key order; parse_config(canonical()) == *this.
  std::string canonical() const;
  /// FNV-1a of canonical().
  std::uint64_t hash() const;
};

/// Parses `key = value` lines; '#' starts a comment; unknown keys throw ConfigError.
ExperimentConfig parse_config(std::istream& is, const std::string& source = "<config>");
ExperimentConfig load_config(const std::filesystem::path& path);

struct TrialResult {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  DecayCurve curve;
  KappaFit fit;
};

enum class Verdict { Pass, Fail, NoPrediction };
std::string_view verdict_name(Verdict v) noexcept;

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<TrialResult> trials;
  double kappa_median = 0;
  double kappa_q1 = 0;
  double kappa_q3 = 0;
  KappaPrediction theory;
  Verdict verdict = Verdict::NoPrediction;
  std::string verdict_rule;
  std::uint64_t config_hash = 0;
  std::string version = kVersion;

  double kappa_iqr() const { return kappa_q3 - kappa_q1; }
  std::vector<double> kappa_values() const;
  /// Median over trials of sigma at grid position i.
  double median_sigma(std::size_t i) const;
  /// Median over trials of sigma at n (must be on the grid).
  double median_sigma_at(std::size_t n) const;
};

/// Linear-interpolation quantile of unsorted data; handles +inf entries.
double quantile(std::vector<double> values, double q);

/// Worker count: LEVY_THREADS if set and positive, else hardware concurrency.
int default_thread_count();

/// Runs config.trials independent trials (synthesize, transform, sigma curve,
/// slope fit) on `threads` workers (0 = default_thread_count()) and aggregates
/// in trial order. A failing trial aborts the run.
ExperimentReport run_experiment(const ExperimentConfig& config, int threads = 0);

struct FamilyComparison {
  struct Row {
    std::string label;
    KappaPrediction theory;
    double kappa_median;
    double kappa_iqr;
  };
  /// Sorted by theoretical ranking value, ascending.
  std::vector<Row> rows;
  /// Pairs (a, b) with theory(a) < theory(b) but median(a) >= median(b).
  std::vector<std::pair<std::string, std::string>> inversions;
};

/// Orders finished reports; throws ConfigError unless gamma, d, J, p0, tau0 agree.
FamilyComparison compare_families(const std::vector<ExperimentReport>& reports);
FamilyComparison compare_families(const std::vector<ExperimentConfig>& configs, int threads = 0);

struct EmitOptions {
  bool curves = true;
  bool summary = true;
  bool plot = true;
  std::string stem = "experiment";
};

/// Writes <dir>/<stem>_curves.csv, _summary.json and _plot.dat; returns the paths written.
std::vector<std::filesystem::path> emit_outputs(const ExperimentReport& report, const std::filesystem::path& dir,
                                                const EmitOptions& options = {});

void write_curves_csv(std::ostream& os, const ExperimentReport& report);
void write_plot_data(std::ostream& os, const ExperimentReport& report);
std::string summary_json(const ExperimentReport& report);
std::string comparison_json(const FamilyComparison& cmp);

struct SelfTestResult {
  std::string name;
  bool passed;
  std::string detail;
};

/// Quick in-process invariant checks backing the `selftest` CLI verb.
std::vector<SelfTestResult> run_selftest();

}  // namespace levy
