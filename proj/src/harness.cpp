#include "levy/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "levy/error.hpp"
#include "levy/rng.hpp"
#include "levy/wavelets.hpp"

namespace levy {

namespace {

const std::vector<std::string> kFamilyKeys{"sigma2", "alpha", "lambda", "jump_sigma", "jump_a",
                                           "jump_b", "jump_c", "delta",  "gamma_ig"};

std::string shortest(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& key, const std::string& text) {
  if (text == "inf" || text == "+inf") return std::numeric_limits<double>::infinity();
  double v = 0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw ConfigError("key '" + key + "': '" + text + "' is not a number");
  }
  return v;
}

template <class Int>
Int parse_int(const std::string& key, const std::string& text) {
  Int v = 0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw ConfigError("key '" + key + "': '" + text + "' is not an integer");
  }
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError("key '" + key + "': '" + text + "' is not a boolean");
}

nlohmann::ordered_json number_or_null(double v) {
  return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
}

nlohmann::ordered_json prediction_json(const KappaPrediction& p) {
  nlohmann::ordered_json j;
  j["kind"] = kappa_kind_name(p.kind);
  j["lower"] = number_or_null(p.lower);
  j["upper"] = number_or_null(p.upper);
  j["condition_satisfied"] = p.condition_satisfied;
  return j;
}

}  // namespace

LevyExponent ExperimentConfig::exponent() const { return LevyExponent::from_named(family, family_params); }

OperatorSymbol ExperimentConfig::symbol() const {
  if (op == "fractional_laplacian") return OperatorSymbol::fractional_laplacian(gamma);
  if (op == "matern") return OperatorSymbol::matern(gamma);
  throw ConfigError("unknown operator '" + op + "' (expected fractional_laplacian or matern)");
}

std::vector<std::size_t> ExperimentConfig::effective_n_grid() const {
  return n_grid.empty() ? dyadic_grid(2, J * d - 2) : n_grid;
}

FitRange ExperimentConfig::fit_range() const {
  return FitRange{fit_lo, fit_hi > 0 ? fit_hi : std::ldexp(1.0, J * d - 4)};
}

KappaPrediction ExperimentConfig::prediction() const { return theoretical_kappa(exponent(), gamma, d, p0, tau0); }

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  if (trials < 1) fail("trials must be >= 1");
  if (d != 1 && d != 2) fail("d must be 1 or 2");
  if (J < 1 || J * d > GridSpec::kMaxLog2Cells) fail("J out of range for the 2^26 cell guard");
  if (k < 1 || k > WaveletSpec::kMaxMoments) fail("k must lie in [1, 10]");
  if (!(gamma > 0) || !std::isfinite(gamma)) fail("gamma must be > 0");
  if (!(p0 > 0) || !std::isfinite(p0)) fail("p0 must be finite and > 0 for empirical norms");
  if (!std::isfinite(tau0)) fail("tau0 must be finite");
  if (!(tolerance >= 0)) fail("tolerance must be >= 0");
  if (J * d - 4 < 1 && fit_hi <= 0) fail("J too small for the default fit window");
  const WaveletSpec spec(k);
  if (spec.max_levels(J) < 1) fail("J must exceed zeta = " + std::to_string(spec.zeta()) + " for k = " + std::to_string(k));
  const auto grid_n = effective_n_grid();
  if (!std::is_sorted(grid_n.begin(), grid_n.end()) || grid_n.empty() || grid_n.front() == 0) {
    fail("n_grid must be ascending positive integers");
  }
  const FitRange fr = fit_range();
  if (!(fr.n_lo < fr.n_hi)) fail("fit_lo must be < fit_hi");
  const auto in_window = std::count_if(grid_n.begin(), grid_n.end(), [&](std::size_t n) {
    return double(n) >= fr.n_lo && double(n) <= fr.n_hi;
  });
  if (in_window < 5) {
    fail("fit window [" + std::to_string(fr.n_lo) + ", " + std::to_string(fr.n_hi) + "] holds " +
         std::to_string(in_window) + " grid points; at least 5 are needed");
  }
  try {
    symbol();
    exponent();
  } catch (const ParameterError& e) {
    fail(e.what());
  }
  if (!prediction().condition_satisfied && !allow_inadmissible) {
    throw AdmissibilityError("configuration violates the admissibility condition " +
                             admissibility_condition(exponent(), gamma, d, p0, tau0) +
                             "; set allow_inadmissible = true to run anyway");
  }
}

std::string ExperimentConfig::canonical() const {
  std::ostringstream os;
  os << "family = " << family << '\n';
  for (const auto& [key, v] : family_params) os << key << " = " << shortest(v) << '\n';
  os << "operator = " << op << '\n';
  os << "gamma = " << shortest(gamma) << '\n';
  os << "d = " << d << '\n';
  os << "J = " << J << '\n';
  os << "k = " << k << '\n';
  os << "trials = " << trials << '\n';
  os << "seed = " << seed << '\n';
  os << "p0 = " << shortest(p0) << '\n';
  os << "tau0 = " << shortest(tau0) << '\n';
  os << "n_grid = ";
  if (n_grid.empty()) {
    os << "dyadic";
  } else {
    for (std::size_t i = 0; i < n_grid.size(); ++i) os << (i ? "," : "") << n_grid[i];
  }
  os << '\n';
  os << "fit_lo = " << shortest(fit_lo) << '\n';
  os << "fit_hi = " << shortest(fit_hi) << '\n';
  os << "tolerance = " << shortest(tolerance) << '\n';
  os << "infinite_margin = " << shortest(infinite_margin) << '\n';
  os << "allow_inadmissible = " << (allow_inadmissible ? "true" : "false") << '\n';
  if (!output.empty()) os << "output = " << output << '\n';
  return os.str();
}

std::uint64_t ExperimentConfig::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

ExperimentConfig parse_config(std::istream& is, const std::string& source) {
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash_pos = line.find('#');
    if (hash_pos != std::string::npos) line.erase(hash_pos);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    const std::string where = source + ":" + std::to_string(lineno);
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (value.empty()) throw ConfigError(where + ": empty value for '" + key + "'");
    try {
      if (key == "family") {
        cfg.family = value;
      } else if (std::find(kFamilyKeys.begin(), kFamilyKeys.end(), key) != kFamilyKeys.end()) {
        cfg.family_params[key] = parse_double(key, value);
      } else if (key == "operator") {
        cfg.op = value;
      } else if (key == "gamma") {
        cfg.gamma = parse_double(key, value);
      } else if (key == "d") {
        cfg.d = parse_int<int>(key, value);
      } else if (key == "J") {
        cfg.J = parse_int<int>(key, value);
      } else if (key == "k") {
        cfg.k = parse_int<int>(key, value);
      } else if (key == "trials") {
        cfg.trials = parse_int<int>(key, value);
      } else if (key == "seed") {
        cfg.seed = parse_int<std::uint64_t>(key, value);
      } else if (key == "p0") {
        cfg.p0 = parse_double(key, value);
      } else if (key == "tau0") {
        cfg.tau0 = parse_double(key, value);
      } else if (key == "n_grid") {
        cfg.n_grid.clear();
        if (value != "dyadic") {
          std::stringstream ss(value);
          std::string item;
          while (std::getline(ss, item, ',')) cfg.n_grid.push_back(parse_int<std::size_t>(key, trim(item)));
        }
      } else if (key == "fit_lo") {
        cfg.fit_lo = parse_double(key, value);
      } else if (key == "fit_hi") {
        cfg.fit_hi = parse_double(key, value);
      } else if (key == "tolerance") {
        cfg.tolerance = parse_double(key, value);
      } else if (key == "infinite_margin") {
        cfg.infinite_margin = parse_double(key, value);
      } else if (key == "allow_inadmissible") {
        cfg.allow_inadmissible = parse_bool(key, value);
      } else if (key == "output") {
        cfg.output = value;
      } else {
        throw ConfigError("unknown key '" + key + "'");
      }
    } catch (const ConfigError& e) {
      throw ConfigError(where + ": " + e.what());
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open config '" + path.string() + "'");
  return parse_config(is, path.string());
}

std::string_view verdict_name(Verdict v) noexcept {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::NoPrediction: return "no_prediction";
  }
  return "unknown";
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  if (lo == hi || values[lo] == values[hi]) return values[lo];
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

std::vector<double> ExperimentReport::kappa_values() const {
  std::vector<double> out;
  for (const auto& t : trials) out.push_back(t.fit.kappa);
  return out;
}

double ExperimentReport::median_sigma(std::size_t i) const {
  std::vector<double> v;
  for (const auto& t : trials) v.push_back(t.curve.sigma.at(i));
  return quantile(std::move(v), 0.5);
}

double ExperimentReport::median_sigma_at(std::size_t n) const {
  if (trials.empty()) throw ShapeError("report has no trials");
  const auto& grid = trials.front().curve.n;
  const auto it = std::find(grid.begin(), grid.end(), n);
  if (it == grid.end()) throw ShapeError("n = " + std::to_string(n) + " is not on the curve grid");
  return median_sigma(static_cast<std::size_t>(it - grid.begin()));
}

int default_thread_count() {
  if (const char* env = std::getenv("LEVY_THREADS")) {
    int v = 0;
    auto res = std::from_chars(env, env + std::strlen(env), v);
    if (res.ec == std::errc() && v > 0) return v;
  }
  return std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
}

namespace {

TrialResult run_trial(const ExperimentConfig& cfg, const LevyExponent& e, const OperatorSymbol& symbol,
                      const WaveletSpec& spec, std::size_t index) {
  TrialResult out;
  out.index = index;
  out.seed = derive_seed(cfg.seed, index);
  const GridSpec grid = cfg.grid();
  const ProcessField process = synthesize_process(e, grid, symbol, out.seed);
  const WaveletCoeffs coeffs = dwt_periodic(grid, process.values, spec);
  const auto n_grid = cfg.effective_n_grid();
  out.curve = sigma_curve(coeffs, cfg.besov(), n_grid);
  out.fit = estimate_kappa(out.curve, cfg.fit_range());
  out.curve.fit = out.fit;
  return out;
}

Verdict judge(const ExperimentConfig& cfg, const KappaPrediction& theory, double median, std::string& rule) {
  std::ostringstream os;
  Verdict v = Verdict::NoPrediction;
  switch (theory.kind) {
    case KappaKind::Exact:
      os << "|median - " << shortest(theory.lower) << "| <= " << shortest(cfg.tolerance);
      v = std::abs(median - theory.lower) <= cfg.tolerance ? Verdict::Pass : Verdict::Fail;
      break;
    case KappaKind::Bounds:
      os << "median >= " << shortest(theory.lower) << " - " << shortest(cfg.tolerance);
      v = median >= theory.lower - cfg.tolerance ? Verdict::Pass : Verdict::Fail;
      break;
    case KappaKind::Infinite: {
      const double gauss = (cfg.gamma - cfg.tau0) / cfg.d - 0.5;
      os << "median >= gaussian value " << shortest(gauss) << " + " << shortest(cfg.infinite_margin);
      v = median >= gauss + cfg.infinite_margin ? Verdict::Pass : Verdict::Fail;
      break;
    }
    case KappaKind::Undetermined:
      os << "admissibility condition fails; no prediction";
      break;
  }
  rule = os.str();
  return v;
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& config, int threads) {
  config.validate();
  const LevyExponent e = config.exponent();
  const OperatorSymbol symbol = config.symbol();
  const WaveletSpec spec(config.k);
  const auto trials = static_cast<std::size_t>(config.trials);

  std::vector<TrialResult> results(trials);
  std::vector<std::exception_ptr> errors(trials);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < trials; i = next++) {
      try {
        results[i] = run_trial(config, e, symbol, spec, i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int nthreads = std::clamp(threads > 0 ? threads : default_thread_count(), 1, config.trials);
  {
    std::vector<std::jthread> pool;
    for (int t = 1; t < nthreads; ++t) pool.emplace_back(worker);
    worker();
  }
  for (std::size_t i = 0; i < trials; ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const std::exception& ex) {
      throw Error("trial " + std::to_string(i) + " (seed " + std::to_string(derive_seed(config.seed, i)) +
                  ") failed: " + ex.what());
    }
  }

  ExperimentReport report;
  report.config = config;
  report.trials = std::move(results);
  const auto kappas = report.kappa_values();
  report.kappa_median = quantile(kappas, 0.5);
  report.kappa_q1 = quantile(kappas, 0.25);
  report.kappa_q3 = quantile(kappas, 0.75);
  report.theory = config.prediction();
  report.verdict = judge(config, report.theory, report.kappa_median, report.verdict_rule);
  report.config_hash = config.hash();
  return report;
}

FamilyComparison compare_families(const std::vector<ExperimentReport>& reports) {
  FamilyComparison cmp;
  if (reports.empty()) return cmp;
  const auto& ref = reports.front().config;
  for (const auto& r : reports) {
    const auto& c = r.config;
    if (c.gamma != ref.gamma || c.d != ref.d || c.J != ref.J || c.p0 != ref.p0 || c.tau0 != ref.tau0) {
      throw ConfigError("compare: configurations must share gamma, d, J, p0 and tau0");
    }
    cmp.rows.push_back({c.exponent().tag(), r.theory, r.kappa_median, r.kappa_iqr()});
  }
  std::stable_sort(cmp.rows.begin(), cmp.rows.end(), [](const auto& a, const auto& b) {
    return a.theory.ranking_value() < b.theory.ranking_value();
  });
  for (std::size_t a = 0; a < cmp.rows.size(); ++a) {
    for (std::size_t b = a + 1; b < cmp.rows.size(); ++b) {
      const auto& ra = cmp.rows[a];
      const auto& rb = cmp.rows[b];
      if (!(ra.theory.ranking_value() < rb.theory.ranking_value())) continue;
      const bool both_infinite = std::isinf(ra.kappa_median) && std::isinf(rb.kappa_median);
      if (ra.kappa_median >= rb.kappa_median && !both_infinite) cmp.inversions.emplace_back(ra.label, rb.label);
    }
  }
  return cmp;
}

FamilyComparison compare_families(const std::vector<ExperimentConfig>& configs, int threads) {
  std::vector<ExperimentReport> reports;
  for (const auto& c : configs) reports.push_back(run_experiment(c, threads));
  return compare_families(reports);
}

void write_curves_csv(std::ostream& os, const ExperimentReport& report) {
  os << "trial,n,sigma\n";
  for (const auto& t : report.trials) {
    for (std::size_t i = 0; i < t.curve.n.size(); ++i) {
      os << t.index << ',' << t.curve.n[i] << ',' << shortest(t.curve.sigma[i]) << '\n';
    }
  }
}

void write_plot_data(std::ostream& os, const ExperimentReport& report) {
  os << "# log(n) log(median sigma_n)\n";
  if (report.trials.empty()) return;
  const auto& grid = report.trials.front().curve.n;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double s = report.median_sigma(i);
    if (!(s > 0)) continue;
    os << shortest(std::log(static_cast<double>(grid[i]))) << ' ' << shortest(std::log(s)) << '\n';
  }
}

std::string summary_json(const ExperimentReport& report) {
  const auto& c = report.config;
  nlohmann::ordered_json j;
  j["family"] = c.family;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (const auto& [k, v] : c.exponent().named_parameters()) params[k] = v;
  j["params"] = params;
  j["operator"] = c.op;
  j["gamma"] = c.gamma;
  j["d"] = c.d;
  j["J"] = c.J;
  j["k"] = c.k;
  j["p0"] = c.p0;
  j["tau0"] = c.tau0;
  j["trials"] = c.trials;
  j["kappa_hat_median"] = number_or_null(report.kappa_median);
  j["kappa_hat_iqr"] = number_or_null(report.kappa_iqr());
  j["kappa_hat_q1"] = number_or_null(report.kappa_q1);
  j["kappa_hat_q3"] = number_or_null(report.kappa_q3);
  j["theory"] = prediction_json(report.theory);
  j["verdict"] = verdict_name(report.verdict);
  j["verdict_rule"] = report.verdict_rule;
  j["tolerance_note"] = "tolerances are engineering choices; the theory is asymptotic";
  const FitRange fr = c.fit_range();
  j["fit_range"] = {fr.n_lo, fr.n_hi};
  nlohmann::ordered_json per_trial = nlohmann::ordered_json::array();
  for (const auto& t : report.trials) {
    per_trial.push_back({{"trial", t.index},
                         {"seed", t.seed},
                         {"kappa_hat", number_or_null(t.fit.kappa)},
                         {"stderr", number_or_null(t.fit.std_error)},
                         {"infinite", t.fit.infinite}});
  }
  j["per_trial"] = per_trial;
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(report.config_hash));
  j["provenance"] = {{"config_hash", hash}, {"base_seed", c.seed}, {"version", report.version}};
  return j.dump(2) + "\n";
}

std::string comparison_json(const FamilyComparison& cmp) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& r : cmp.rows) {
    rows.push_back({{"family", r.label},
                    {"theory", prediction_json(r.theory)},
                    {"kappa_hat_median", number_or_null(r.kappa_median)},
                    {"kappa_hat_iqr", number_or_null(r.kappa_iqr)}});
  }
  j["rows"] = rows;
  nlohmann::ordered_json inv = nlohmann::ordered_json::array();
  for (const auto& [a, b] : cmp.inversions) inv.push_back({a, b});
  j["inversions"] = inv;
  return j.dump(2) + "\n";
}

std::vector<std::filesystem::path> emit_outputs(const ExperimentReport& report, const std::filesystem::path& dir,
                                                const EmitOptions& options) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
  std::vector<std::filesystem::path> written;
  auto emit = [&](const std::string& suffix, const std::function<void(std::ostream&)>& body) {
    const auto path = dir / (options.stem + suffix);
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
    body(os);
    os.flush();
    if (!os) throw IoError("write to '" + path.string() + "' failed");
    written.push_back(path);
  };
  if (options.curves) emit("_curves.csv", [&](std::ostream& os) { write_curves_csv(os, report); });
  if (options.summary) emit("_summary.json", [&](std::ostream& os) { os << summary_json(report); });
  if (options.plot) emit("_plot.dat", [&](std::ostream& os) { write_plot_data(os, report); });
  return written;
}

}  // namespace levy
