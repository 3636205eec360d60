#include "levy/exponents.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "levy/error.hpp"
#include "levy/rng.hpp"

namespace levy {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw ParameterError(what);
}

bool positive(double x) { return std::isfinite(x) && x > 0; }

}  // namespace

JumpDistribution::JumpDistribution(Law law) : law_(law) {
  std::visit(overloaded{
                 [](const GaussianJump& j) { require(positive(j.sigma), "Gaussian jump: sigma must be > 0"); },
                 [](const UniformJump& j) {
                   require(std::isfinite(j.a) && std::isfinite(j.b) && j.a < j.b, "uniform jump: need a < b");
                 },
                 [](const DiracJump& j) { require(std::isfinite(j.c), "Dirac jump: c must be finite"); },
             },
             law_);
}

std::complex<double> JumpDistribution::characteristic(double xi) const {
  return std::visit(overloaded{
                        [&](const GaussianJump& j) -> std::complex<double> {
                          return std::exp(-0.5 * j.sigma * j.sigma * xi * xi);
                        },
                        [&](const UniformJump& j) -> std::complex<double> {
                          if (xi == 0) return 1.0;
                          const std::complex<double> i(0, 1);
                          return (std::exp(i * xi * j.b) - std::exp(i * xi * j.a)) / (i * xi * (j.b - j.a));
                        },
                        [&](const DiracJump& j) -> std::complex<double> {
                          return std::polar(1.0, xi * j.c);
                        },
                    },
                    law_);
}

double JumpDistribution::sample(Rng& rng) const {
  return std::visit(overloaded{
                        [&](const GaussianJump& j) { return j.sigma * rng.normal(); },
                        [&](const UniformJump& j) { return j.a + (j.b - j.a) * rng.uniform(); },
                        [&](const DiracJump& j) { return j.c; },
                    },
                    law_);
}

std::string_view family_name(Family f) noexcept {
  switch (f) {
    case Family::Gaussian: return "gaussian";
    case Family::SymmetricStable: return "sas";
    case Family::CompoundPoisson: return "compound_poisson";
    case Family::Laplace: return "laplace";
    case Family::InverseGaussian: return "inverse_gaussian";
  }
  return "unknown";
}

LevyExponent::LevyExponent(Params params) : params_(std::move(params)) {
  std::visit(overloaded{
                 [](const Gaussian& g) { require(positive(g.sigma2), "gaussian: sigma2 must be > 0"); },
                 [](const SymmetricStable& s) {
                   require(std::isfinite(s.alpha) && s.alpha > 0 && s.alpha < 2, "sas: alpha must lie in (0, 2)");
                 },
                 [](const CompoundPoisson& c) { require(positive(c.rate), "compound_poisson: lambda must be > 0"); },
                 [](const Laplace&) {},
                 [](const InverseGaussian& ig) {
                   require(positive(ig.delta) && positive(ig.gamma), "inverse_gaussian: delta and gamma_ig must be > 0");
                 },
             },
             params_);
}

Family LevyExponent::family() const noexcept { return static_cast<Family>(params_.index()); }

std::complex<double> LevyExponent::psi(double xi) const {
  using C = std::complex<double>;
  if (xi == 0) return 0.0;
  return std::visit(overloaded{
                        [&](const Gaussian& g) -> C { return -0.5 * g.sigma2 * xi * xi; },
                        [&](const SymmetricStable& s) -> C { return -std::pow(std::abs(xi), s.alpha); },
                        [&](const CompoundPoisson& c) -> C { return c.rate * (c.jump.characteristic(xi) - 1.0); },
                        [&](const Laplace&) -> C { return -std::log1p(xi * xi); },
                        [&](const InverseGaussian& ig) -> C {
                          return ig.delta * (ig.gamma - std::sqrt(C(ig.gamma * ig.gamma, -2.0 * xi)));
                        },
                    },
                    params_);
}

BGIndices LevyExponent::bg_indices() const noexcept {
  return std::visit(overloaded{
                        [](const Gaussian&) { return BGIndices{2, 2}; },
                        [](const SymmetricStable& s) { return BGIndices{s.alpha, s.alpha}; },
                        [](const CompoundPoisson&) { return BGIndices{0, 0}; },
                        [](const Laplace&) { return BGIndices{0, 0}; },
                        [](const InverseGaussian&) { return BGIndices{0.5, 0.5}; },
                    },
                    params_);
}

std::map<std::string, double> LevyExponent::named_parameters() const {
  return std::visit(
      overloaded{
          [](const Gaussian& g) { return std::map<std::string, double>{{"sigma2", g.sigma2}}; },
          [](const SymmetricStable& s) { return std::map<std::string, double>{{"alpha", s.alpha}}; },
          [](const CompoundPoisson& c) {
            std::map<std::string, double> out{{"lambda", c.rate}};
            std::visit(overloaded{
                           [&](const GaussianJump& j) { out["jump_sigma"] = j.sigma; },
                           [&](const UniformJump& j) {
                             out["jump_a"] = j.a;
                             out["jump_b"] = j.b;
                           },
                           [&](const DiracJump& j) { out["jump_c"] = j.c; },
                       },
                       c.jump.law());
            return out;
          },
          [](const Laplace&) { return std::map<std::string, double>{}; },
          [](const InverseGaussian& ig) {
            return std::map<std::string, double>{{"delta", ig.delta}, {"gamma_ig", ig.gamma}};
          },
      },
      params_);
}

std::string LevyExponent::tag() const {
  std::ostringstream os;
  os.precision(17);
  os << name() << '(';
  bool first = true;
  for (const auto& [k, v] : named_parameters()) {
    os << (first ? "" : ",") << k << '=' << v;
    first = false;
  }
  os << ')';
  return os.str();
}

LevyExponent LevyExponent::from_named(std::string_view name, const std::map<std::string, double>& values) {
  std::map<std::string, double> rest = values;
  auto take = [&](const std::string& key, double fallback) {
    auto it = rest.find(key);
    if (it == rest.end()) return fallback;
    double v = it->second;
    rest.erase(it);
    return v;
  };
  auto finish = [&](LevyExponent e) {
    if (!rest.empty()) {
      throw ParameterError("family '" + std::string(name) + "' does not take parameter '" + rest.begin()->first + "'");
    }
    return e;
  };

  if (name == "gaussian") return finish(gaussian(take("sigma2", 1.0)));
  if (name == "cauchy") return finish(cauchy());
  if (name == "sas") {
    if (!values.count("alpha")) throw ParameterError("sas: parameter 'alpha' is required");
    return finish(stable(take("alpha", 1.0)));
  }
  if (name == "laplace") return finish(laplace());
  if (name == "inverse_gaussian") {
    double delta = take("delta", 1.0);
    return finish(inverse_gaussian(delta, take("gamma_ig", 1.0)));
  }
  if (name == "compound_poisson") {
    double rate = take("lambda", 1.0);
    const bool uniform = values.count("jump_a") || values.count("jump_b");
    const bool dirac = values.count("jump_c") > 0;
    const bool gauss = values.count("jump_sigma") > 0;
    if (int(uniform) + int(dirac) + int(gauss) > 1) {
      throw ParameterError("compound_poisson: conflicting jump parameters");
    }
    JumpDistribution jump(GaussianJump{});
    if (uniform) {
      double a = take("jump_a", -1.0);
      jump = JumpDistribution(UniformJump{a, take("jump_b", 1.0)});
    } else if (dirac) {
      jump = JumpDistribution(DiracJump{take("jump_c", 1.0)});
    } else {
      jump = JumpDistribution(GaussianJump{take("jump_sigma", 1.0)});
    }
    return finish(compound_poisson(rate, jump));
  }
  throw ParameterError("unknown noise family '" + std::string(name) + "'");
}

std::string_view kappa_kind_name(KappaKind k) noexcept {
  switch (k) {
    case KappaKind::Exact: return "exact";
    case KappaKind::Bounds: return "bounds";
    case KappaKind::Infinite: return "infinite";
    case KappaKind::Undetermined: return "undetermined";
  }
  return "unknown";
}

namespace {

void check_kappa_args(double gamma, int d, double p0, double tau0) {
  require(std::isfinite(gamma) && gamma > 0, "gamma must be > 0");
  require(d >= 1, "d must be >= 1");
  require(!std::isnan(p0) && p0 > 0, "p0 must be > 0");
  require(std::isfinite(tau0), "tau0 must be finite");
}

}  // namespace

KappaPrediction theoretical_kappa(const LevyExponent& e, double gamma, int d, double p0, double tau0) {
  check_kappa_args(gamma, d, p0, tau0);
  const double dd = d;
  const double base = (gamma - tau0) / dd;
  KappaPrediction out;
  if (e.is_gaussian()) {
    out.condition_satisfied = gamma > tau0 + dd / 2;
    if (out.condition_satisfied) {
      out.kind = KappaKind::Exact;
      out.lower = out.upper = base - 0.5;
    }
    return out;
  }
  out.condition_satisfied = gamma > tau0 + dd - dd / p0;
  if (!out.condition_satisfied) return out;
  const BGIndices bg = e.bg_indices();
  if (bg.beta == 0) {
    out.kind = KappaKind::Infinite;
    out.lower = out.upper = std::numeric_limits<double>::infinity();
    return out;
  }
  out.kind = KappaKind::Bounds;
  out.lower = base + 1.0 / bg.beta - 1.0;
  out.upper = bg.beta_prime > 0 ? base + 1.0 / bg.beta_prime - 1.0 : std::numeric_limits<double>::infinity();
  return out;
}

std::string admissibility_condition(const LevyExponent& e, double gamma, int d, double p0, double tau0) {
  std::ostringstream os;
  os.precision(12);
  if (e.is_gaussian()) {
    os << "gamma > tau0 + d/2 (" << gamma << " > " << tau0 + d / 2.0 << ")";
  } else {
    os << "gamma > tau0 + d - d/p0 (" << gamma << " > " << tau0 + d - d / p0 << ")";
  }
  return os.str();
}

std::string_view membership_name(Membership m) noexcept {
  switch (m) {
    case Membership::AlmostSurelyIn: return "almost_surely_in";
    case Membership::AlmostSurelyOut: return "almost_surely_out";
    case Membership::Critical: return "critical";
  }
  return "unknown";
}

Membership check_besov_membership_prediction(const LevyExponent& e, double gamma, int d, double p, double tau) {
  require(!std::isnan(p) && p > 0, "p must be > 0");
  double in_below, out_above;
  if (e.is_gaussian()) {
    in_below = out_above = gamma - d / 2.0;
  } else {
    const BGIndices bg = e.bg_indices();
    in_below = gamma + d * (1.0 / std::max(p, bg.beta) - 1.0);
    out_above = gamma + d * (1.0 / std::max(p, bg.beta_prime) - 1.0);
  }
  if (tau < in_below) return Membership::AlmostSurelyIn;
  if (tau > out_above) return Membership::AlmostSurelyOut;
  return Membership::Critical;
}

}  // namespace levy
