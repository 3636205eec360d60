#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "levy/error.hpp"
#include "levy/harness.hpp"

using namespace levy;
namespace fs = std::filesystem;

namespace {

ExperimentConfig parse(const std::string& text) {
  std::istringstream is(text);
  return parse_config(is);
}

ExperimentConfig small(const std::string& family_line, int trials = 4) {
  return parse(family_line + "\nJ = 12\ntrials = " + std::to_string(trials) + "\nseed = 99\n");
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("levy_harness_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("config parsing") {
  const auto c = parse(R"(# comment line
family = sas
alpha = 1.5   # trailing comment
operator = matern
gamma = 1.25
d = 2
J = 7
k = 3
trials = 5
seed = 12345678901
p0 = 1.5
tau0 = 0.25
n_grid = 4, 8, 16, 32, 64, 128
fit_lo = 8
fit_hi = 128
tolerance = 0.2
)");
  CHECK(c.family == "sas");
  CHECK(c.family_params.at("alpha") == 1.5);
  CHECK(c.op == "matern");
  CHECK(c.gamma == 1.25);
  CHECK(c.d == 2);
  CHECK(c.J == 7);
  CHECK(c.k == 3);
  CHECK(c.trials == 5);
  CHECK(c.seed == 12345678901ull);
  CHECK(c.n_grid.size() == 6);
  CHECK(c.fit_range().n_hi == 128);
  CHECK(c.tolerance == 0.2);

  const auto again = parse(c.canonical());
  CHECK(again.canonical() == c.canonical());
  CHECK(again.hash() == c.hash());
  CHECK(parse(c.canonical() + "\nseed = 1\n").hash() != c.hash());

  const auto defaults = parse("family = gaussian\nJ = 10\n");
  CHECK(defaults.effective_n_grid().front() == 4);
  CHECK(defaults.effective_n_grid().back() == 256);
  CHECK(defaults.fit_range().n_lo == 16);
  CHECK(defaults.fit_range().n_hi == 64);
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse("gama = 1\n"), ConfigError);
  try {
    parse("family = gaussian\ngama = 1\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("gama") != std::string::npos);
  }
  CHECK_THROWS_AS(parse("gamma = abc\n"), ConfigError);
  CHECK_THROWS_AS(parse("no equals sign\n"), ConfigError);
  CHECK_THROWS_AS(parse("family = sas\n").validate(), Error);
  CHECK_THROWS_AS(parse("family = gaussian\nd = 3\n").validate(), Error);
  CHECK_THROWS_AS(parse("family = gaussian\nJ = 10\n").validate(), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/levy.cfg"), IoError);
}

TEST_CASE("admissibility gate") {
  auto c = parse("family = gaussian\ngamma = 0.4\nJ = 12\n");
  try {
    c.validate();
    FAIL("expected AdmissibilityError");
  } catch (const AdmissibilityError& e) {
    CHECK(std::string(e.what()).find("gamma > tau0 + d/2") != std::string::npos);
  }
  CHECK_THROWS_AS(run_experiment(c, 1), AdmissibilityError);
  c.allow_inadmissible = true;
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("run_experiment is deterministic") {
  const auto c = small("family = cauchy");
  const auto a = run_experiment(c, 1);
  const auto b = run_experiment(c, 3);
  REQUIRE(a.trials.size() == 4);
  for (std::size_t t = 0; t < a.trials.size(); ++t) {
    CHECK(a.trials[t].seed == b.trials[t].seed);
    CHECK(a.trials[t].curve.sigma == b.trials[t].curve.sigma);
    CHECK(a.trials[t].fit.kappa == b.trials[t].fit.kappa);
  }
  CHECK(a.kappa_median == b.kappa_median);
  CHECK(a.kappa_q1 <= a.kappa_median);
  CHECK(a.kappa_median <= a.kappa_q3);
  CHECK(a.theory.kind == KappaKind::Bounds);
  CHECK(a.theory.lower == doctest::Approx(1.0));
  CHECK(a.config_hash == c.hash());
  CHECK(summary_json(a) == summary_json(b));
}

TEST_CASE("quantiles") {
  CHECK(quantile({3, 1, 2}, 0.5) == 2);
  CHECK(quantile({1, 2, 3, 4}, 0.5) == 2.5);
  CHECK(quantile({1, 2, 3, 4}, 0.25) == doctest::Approx(1.75));
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(std::isinf(quantile({1, inf, inf}, 0.5)));
  CHECK(quantile({1, 2, inf}, 0.0) == 1);
}

TEST_CASE("emitted outputs") {
  const auto c = small("family = laplace", 3);
  const auto report = run_experiment(c, 1);
  const auto dir = scratch_dir("emit");
  const auto paths = emit_outputs(report, dir);
  REQUIRE(paths.size() == 3);
  for (const auto& p : paths) CHECK(fs::exists(p));

  std::istringstream curves(slurp(dir / "experiment_curves.csv"));
  std::string line;
  std::getline(curves, line);
  CHECK(line == "trial,n,sigma");
  std::size_t rows = 0;
  while (std::getline(curves, line)) rows += !line.empty();
  CHECK(rows == std::size_t(c.trials) * c.effective_n_grid().size());

  const auto summary = nlohmann::json::parse(slurp(dir / "experiment_summary.json"));
  CHECK(summary["family"] == "laplace");
  CHECK(summary["theory"]["kind"] == "infinite");
  CHECK(summary["per_trial"].size() == 3);
  CHECK(summary["provenance"]["version"] == kVersion);

  const std::vector<std::string> first{slurp(paths[0]), slurp(paths[1]), slurp(paths[2])};
  const auto rerun = run_experiment(c, 2);
  const auto paths2 = emit_outputs(rerun, dir);
  for (std::size_t i = 0; i < 3; ++i) CHECK(slurp(paths2[i]) == first[i]);
  fs::remove_all(dir);
}

TEST_CASE("verdicts") {
  SUBCASE("bounds prediction") {
    const auto r = run_experiment(small("family = sas\nalpha = 1.5", 3), 1);
    CHECK(r.theory.kind == KappaKind::Bounds);
    CHECK(r.theory.lower == doctest::Approx(2.0 / 3.0));
    CHECK(r.theory.upper == doctest::Approx(2.0 / 3.0));
    CHECK(r.verdict != Verdict::NoPrediction);
    CHECK_FALSE(r.verdict_rule.empty());
  }
  SUBCASE("inadmissible runs carry no prediction") {
    auto c = small("family = gaussian\ngamma = 0.4\nallow_inadmissible = true", 2);
    const auto r = run_experiment(c, 1);
    CHECK(r.verdict == Verdict::NoPrediction);
  }
}

TEST_CASE("family comparison") {
  SUBCASE("single config") {
    const auto cmp = compare_families(std::vector<ExperimentConfig>{small("family = gaussian", 3)}, 1);
    CHECK(cmp.rows.size() == 1);
    CHECK(cmp.inversions.empty());
  }
  SUBCASE("stable indices and a compound Poisson noise") {
    const std::vector<ExperimentConfig> configs{small("family = sas\nalpha = 0.8", 5),
                                                small("family = sas\nalpha = 1.5", 5),
                                                small("family = compound_poisson\nlambda = 1", 5),
                                                small("family = gaussian", 5)};
    const auto cmp = compare_families(configs, 1);
    REQUIRE(cmp.rows.size() == 4);
    CHECK(cmp.rows.front().label.find("gaussian") != std::string::npos);
    CHECK(cmp.rows.back().label.find("compound_poisson") != std::string::npos);
    for (std::size_t i = 1; i < cmp.rows.size(); ++i) {
      CHECK(cmp.rows[i - 1].theory.ranking_value() <= cmp.rows[i].theory.ranking_value());
    }
    CHECK(cmp.inversions.empty());
    const auto j = nlohmann::json::parse(comparison_json(cmp));
    CHECK(j["rows"].size() == 4);
  }
  SUBCASE("mismatched settings are rejected") {
    const auto a = run_experiment(small("family = gaussian", 2), 1);
    auto cb = small("family = cauchy", 2);
    cb.gamma = 1.5;
    const auto b = run_experiment(cb, 1);
    CHECK_THROWS_AS(compare_families({a, b}), ConfigError);
  }
}

TEST_CASE("shipped configurations load and validate") {
  std::size_t count = 0;
  for (const auto& entry : fs::directory_iterator(LEVY_CONFIG_DIR)) {
    if (entry.path().extension() != ".cfg") continue;
    CAPTURE(entry.path().string());
    const auto c = load_config(entry.path());
    CHECK_NOTHROW(c.validate());
    CHECK(c.J == 14);
    ++count;
  }
  CHECK(count >= 7);
}

TEST_CASE("selftest passes") {
  for (const auto& r : run_selftest()) {
    CAPTURE(r.name);
    CAPTURE(r.detail);
    CHECK(r.passed);
  }
}
