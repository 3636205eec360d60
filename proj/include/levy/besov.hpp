#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "levy/wavelets.hpp"

namespace levy {

/// Smoothness tau, integrability p, fine index q (q may be +inf) on the d-torus.
struct BesovParams {
  double tau = 0.0;
  double p = 2.0;
  double q = 2.0;
  int d = 1;

  /// Throws ParameterError unless p, q > 0 and d >= 1.
  void validate() const;
  /// Level weight 2^{j(tau - d/p)}.
  double level_weight(int j) const;
};

/// (sum_j 2^{j(tau-d/p)q} sum_G (sum_m |lambda|^p)^{q/p})^{1/q}; max over j when q = inf.
double besov_seq_norm(const WaveletCoeffs& coeffs, const BesovParams& params);

/// |w_j lambda| for every coefficient, in iteration order.
std::vector<double> weighted_magnitudes(const WaveletCoeffs& coeffs, const BesovParams& params);

struct NTermResult {
  /// Flat positions of the kept coefficients, largest weighted magnitude first.
  std::vector<std::size_t> kept;
  double residual = 0.0;
};

/// Best n-term approximation in b^tau_{p,p} (params.q is ignored). Ties are
/// broken by iteration order. The residual sums discarded |w lambda|^p in
/// ascending order.
NTermResult best_n_term(std::span<const double> weighted, double p, std::size_t n);
NTermResult best_n_term(const WaveletCoeffs& coeffs, const BesovParams& params, std::size_t n);

struct FitRange {
  double n_lo = 16;
  double n_hi = 1024;
};

struct KappaFit {
  double kappa = 0.0;
  double std_error = 0.0;
  FitRange range;
  std::size_t points = 0;
  /// sigma vanished inside the window: faster than any power.
  bool infinite = false;

  static KappaFit infinite_sentinel(FitRange r) {
    return {std::numeric_limits<double>::infinity(), 0.0, r, 0, true};
  }
};

/// sigma_n curve for one coefficient set; p = q.
struct DecayCurve {
  std::vector<std::size_t> n;
  std::vector<double> sigma;
  BesovParams params;
  std::optional<KappaFit> fit;
};

/// sigma_n on `n_grid` (ascending) from a single sort of the weighted magnitudes.
DecayCurve sigma_curve(std::span<const double> weighted, double p, std::span<const std::size_t> n_grid);
DecayCurve sigma_curve(const WaveletCoeffs& coeffs, const BesovParams& params, std::span<const std::size_t> n_grid);

/// {2^lo, ..., 2^hi}.
std::vector<std::size_t> dyadic_grid(int lo, int hi);

/// Least-squares slope of -log sigma against log n over the window.
/// Throws FitError with fewer than five usable points.
KappaFit estimate_kappa(const DecayCurve& curve, FitRange range);

/// Level-wise partial norms 2^{j(tau-d/p)} (sum_{G>0,m} |lambda|^p)^{1/p}, one per
/// detail level, and their log2-slope in j. A negative slope marks a convergent tail.
struct RegularityScan {
  std::vector<double> p_grid;
  std::vector<double> tau_grid;
  /// slopes[ip * tau_grid.size() + it]
  std::vector<double> slopes;
  /// Per p: tau where the slope crosses zero (linear interpolation on the tau grid), NaN if none.
  std::vector<double> critical_tau;

  double slope(std::size_t ip, std::size_t it) const { return slopes[ip * tau_grid.size() + it]; }
  bool member(std::size_t ip, std::size_t it) const { return slope(ip, it) < 0; }
};

/// Requires at least six detail levels.
RegularityScan empirical_regularity_scan(const WaveletCoeffs& coeffs, std::span<const double> p_grid,
                                         std::span<const double> tau_grid);

}  // namespace levy
