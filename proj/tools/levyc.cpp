// levyc: command-line harness for the compressibility experiments.
//
//   levyc run <config>                  run one experiment, emit outputs
//   levyc compare <config> <config>...  rank families against theory
//   levyc selftest                      quick invariant checks
//   levyc predict <family> <gamma> <d> [p0 tau0]
//   levyc dump-noise <family> <d> <J> <seed> <file>
//
// Exit codes: 0 pass, 1 verdict failure, 2 error.

#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "levy/error.hpp"
#include "levy/harness.hpp"

namespace {

// "sas:alpha=1.5" or "compound_poisson:lambda=3,jump_sigma=0.5".
levy::LevyExponent parse_family(const std::string& spec) {
  const auto colon = spec.find(':');
  std::map<std::string, double> params;
  if (colon != std::string::npos) {
    std::stringstream ss(spec.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw levy::ParameterError("family parameter '" + item + "' needs key=value");
      params[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
    }
  }
  return levy::LevyExponent::from_named(spec.substr(0, colon), params);
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

void print_prediction(const levy::KappaPrediction& p) {
  std::cout << "kind: " << levy::kappa_kind_name(p.kind) << "\n"
            << "condition_satisfied: " << (p.condition_satisfied ? "true" : "false") << "\n";
  if (p.kind == levy::KappaKind::Exact) std::cout << "kappa: " << fmt(p.lower) << "\n";
  if (p.kind == levy::KappaKind::Bounds) std::cout << "lower: " << fmt(p.lower) << "\nupper: " << fmt(p.upper) << "\n";
}

int cmd_run(const std::string& path, int threads, const std::string& out_override) {
  auto cfg = levy::load_config(path);
  if (!out_override.empty()) cfg.output = out_override;
  const auto report = levy::run_experiment(cfg, threads);
  std::cout << levy::summary_json(report);
  if (!cfg.output.empty()) {
    levy::EmitOptions opts;
    opts.stem = std::filesystem::path(path).stem().string();
    for (const auto& p : levy::emit_outputs(report, cfg.output, opts)) std::cerr << "wrote " << p.string() << "\n";
  }
  return report.verdict == levy::Verdict::Fail ? 1 : 0;
}

int cmd_compare(const std::vector<std::string>& paths, int threads) {
  std::vector<levy::ExperimentConfig> configs;
  for (const auto& p : paths) configs.push_back(levy::load_config(p));
  const auto cmp = levy::compare_families(configs, threads);
  std::cout << std::left << std::setw(40) << "family" << std::setw(14) << "theory" << std::setw(14) << "median"
            << "iqr\n";
  for (const auto& r : cmp.rows) {
    std::cout << std::setw(40) << r.label << std::setw(14) << fmt(r.theory.ranking_value()) << std::setw(14)
              << fmt(r.kappa_median) << fmt(r.kappa_iqr) << "\n";
  }
  for (const auto& [a, b] : cmp.inversions) std::cout << "inversion: " << a << " !< " << b << "\n";
  std::cout << (cmp.inversions.empty() ? "ordering: consistent" : "ordering: INCONSISTENT") << "\n";
  return cmp.inversions.empty() ? 0 : 1;
}

int cmd_selftest() {
  bool ok = true;
  for (const auto& r : levy::run_selftest()) {
    std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.detail << "\n";
    ok = ok && r.passed;
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compressibility experiments for periodic generalized Levy processes"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker threads (default: LEVY_THREADS or hardware)");

  std::string config_path, out_dir;
  auto* run = app.add_subcommand("run", "run one experiment");
  run->add_option("config", config_path)->required();
  run->add_option("-o,--output", out_dir, "output directory (overrides the config)");

  std::vector<std::string> compare_paths;
  auto* compare = app.add_subcommand("compare", "compare several families");
  compare->add_option("configs", compare_paths)->required();

  auto* selftest = app.add_subcommand("selftest", "run the invariant checks");

  std::string family;
  double gamma = 1, p0 = 2, tau0 = 0;
  int d = 1;
  std::vector<double> extra;
  auto* predict = app.add_subcommand("predict", "print the predicted compressibility");
  predict->add_option("family", family)->required();
  predict->add_option("gamma", gamma)->required();
  predict->add_option("d", d)->required();
  predict->add_option("p0_tau0", extra, "optional p0 and tau0")->expected(0, 2);

  std::string dump_family, dump_path;
  int dump_d = 1, dump_level = 10;
  std::uint64_t dump_seed = 1;
  auto* dump = app.add_subcommand("dump-noise", "write one noise field in the binary LVNF format");
  dump->add_option("family", dump_family)->required();
  dump->add_option("d", dump_d)->required();
  dump->add_option("J", dump_level)->required();
  dump->add_option("seed", dump_seed)->required();
  dump->add_option("file", dump_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run) return cmd_run(config_path, threads, out_dir);
    if (*compare) return cmd_compare(compare_paths, threads);
    if (*selftest) return cmd_selftest();
    if (*predict) {
      if (extra.size() == 1) throw levy::ParameterError("predict: give both p0 and tau0 or neither");
      if (extra.size() == 2) {
        p0 = extra[0];
        tau0 = extra[1];
      }
      print_prediction(levy::theoretical_kappa(parse_family(family), gamma, d, p0, tau0));
      return 0;
    }
    if (*dump) {
      const auto field = levy::generate_noise(parse_family(dump_family), levy::GridSpec{dump_d, dump_level}, dump_seed);
      levy::write_noise_field(std::filesystem::path(dump_path), field);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
