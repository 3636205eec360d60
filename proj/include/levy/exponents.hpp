#pragma once

#include <complex>
#include <limits>
#include <map>
#include <string>
#include <string_view>
#include <variant>

namespace levy {

class Rng;

// Jump laws of compound Poisson noise.
struct GaussianJump {
  double sigma = 1.0;
};
struct UniformJump {
  double a = -1.0;
  double b = 1.0;
};
struct DiracJump {
  double c = 1.0;
};

class JumpDistribution {
 public:
  using Law = std::variant<GaussianJump, UniformJump, DiracJump>;

  /// Throws ParameterError unless the law is proper (sigma > 0, a < b, finite c).
  explicit JumpDistribution(Law law);

  const Law& law() const noexcept { return law_; }

  /// Characteristic function E[exp(i xi J)].
  std::complex<double> characteristic(double xi) const;
  double sample(Rng& rng) const;

 private:
  Law law_;
};

enum class Family { Gaussian, SymmetricStable, CompoundPoisson, Laplace, InverseGaussian };

std::string_view family_name(Family f) noexcept;

/// Blumenthal-Getoor indices, 0 <= beta_prime <= beta <= 2.
struct BGIndices {
  double beta = 0.0;
  double beta_prime = 0.0;
};

/// A Levy exponent psi with closed form; the value type behind every noise.
///
/// psi(xi) per family:
///   Gaussian            -sigma2 xi^2 / 2
///   symmetric stable    -|xi|^alpha
///   compound Poisson    rate (P_J(xi) - 1)
///   Laplace             -log(1 + xi^2)
///   inverse Gaussian    delta (gamma - sqrt(gamma^2 - 2 i xi))
class LevyExponent {
 public:
  struct Gaussian {
    double sigma2 = 1.0;
  };
  struct SymmetricStable {
    double alpha = 1.0;
  };
  struct CompoundPoisson {
    double rate = 1.0;
    JumpDistribution jump{GaussianJump{}};
  };
  struct Laplace {};
  struct InverseGaussian {
    double delta = 1.0;
    double gamma = 1.0;
  };
  using Params = std::variant<Gaussian, SymmetricStable, CompoundPoisson, Laplace, InverseGaussian>;

  /// Throws ParameterError on an out-of-domain parameter.
  explicit LevyExponent(Params params);

  static LevyExponent gaussian(double sigma2 = 1.0) { return LevyExponent(Gaussian{sigma2}); }
  static LevyExponent stable(double alpha) { return LevyExponent(SymmetricStable{alpha}); }
  static LevyExponent cauchy() { return stable(1.0); }
  static LevyExponent compound_poisson(double rate, JumpDistribution jump = JumpDistribution(GaussianJump{})) {
    return LevyExponent(CompoundPoisson{rate, jump});
  }
  static LevyExponent laplace() { return LevyExponent(Laplace{}); }
  static LevyExponent inverse_gaussian(double delta = 1.0, double gamma = 1.0) {
    return LevyExponent(InverseGaussian{delta, gamma});
  }

  const Params& params() const noexcept { return params_; }
  Family family() const noexcept;
  bool is_gaussian() const noexcept { return family() == Family::Gaussian; }

  std::complex<double> psi(double xi) const;
  BGIndices bg_indices() const noexcept;

  /// Short descriptor such as "sas(alpha=1.5)".
  std::string tag() const;

  /// Family name plus named numeric parameters, the configuration-file form.
  std::string name() const { return std::string(family_name(family())); }
  std::map<std::string, double> named_parameters() const;

  /// Inverse of name()/named_parameters(). Unknown names or keys throw ParameterError.
  static LevyExponent from_named(std::string_view name, const std::map<std::string, double>& values);

 private:
  Params params_;
};

inline std::complex<double> psi_eval(const LevyExponent& e, double xi) { return e.psi(xi); }
inline BGIndices bg_indices(const LevyExponent& e) noexcept { return e.bg_indices(); }

enum class KappaKind { Exact, Bounds, Infinite, Undetermined };

/// Predicted compressibility exponent. Exact stores value in lower == upper;
/// Infinite stores +inf in both; Undetermined (condition failed) stores NaN.
struct KappaPrediction {
  KappaKind kind = KappaKind::Undetermined;
  double lower = std::numeric_limits<double>::quiet_NaN();
  double upper = std::numeric_limits<double>::quiet_NaN();
  bool condition_satisfied = false;

  double value() const noexcept { return lower; }
  /// Number used to rank predictions: the exact value or lower bound, +inf when infinite.
  double ranking_value() const noexcept { return lower; }
};

std::string_view kappa_kind_name(KappaKind k) noexcept;

/// Compressibility exponent predicted for s = L^{-1} w with L of order gamma.
/// p0 may be +infinity.
KappaPrediction theoretical_kappa(const LevyExponent& e, double gamma, int d, double p0, double tau0);

/// Text form of the admissibility inequality that theoretical_kappa checks.
std::string admissibility_condition(const LevyExponent& e, double gamma, int d, double p0, double tau0);

enum class Membership { AlmostSurelyIn, AlmostSurelyOut, Critical };

std::string_view membership_name(Membership m) noexcept;

/// Besov B^tau_{p,q} membership of s = L^{-1} w predicted from the noise indices.
Membership check_besov_membership_prediction(const LevyExponent& e, double gamma, int d, double p, double tau);

}  // namespace levy
