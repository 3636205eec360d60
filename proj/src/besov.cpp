#include "levy/besov.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "levy/error.hpp"

namespace levy {

namespace {

struct LineFit {
  double slope = 0;
  double intercept = 0;
  double slope_se = 0;
};

LineFit least_squares(std::span<const double> x, std::span<const double> y) {
  const auto n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (x.size() > 2) {
    double ssr = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - fit.intercept - fit.slope * x[i];
      ssr += r * r;
    }
    fit.slope_se = std::sqrt(ssr / (n - 2) / sxx);
  }
  return fit;
}

// Positions sorted by descending magnitude; equal values keep iteration order.
std::vector<std::size_t> descending_order(std::span<const double> weighted) {
  std::vector<std::size_t> order(weighted.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return weighted[a] > weighted[b]; });
  return order;
}

// tail[i] = sum_{r >= i} |v_order[r]|^p, accumulated from the smallest term upward; tail[size] = 0.
std::vector<double> tail_sums(std::span<const double> weighted, std::span<const std::size_t> order, double p) {
  std::vector<double> tail(order.size() + 1, 0.0);
  for (std::size_t i = order.size(); i-- > 0;) tail[i] = tail[i + 1] + std::pow(weighted[order[i]], p);
  return tail;
}

void check_p(double p) {
  if (!(p > 0) || !std::isfinite(p)) throw ParameterError("p must be a finite positive number");
}

}  // namespace

void BesovParams::validate() const {
  if (!(p > 0) || !std::isfinite(p)) throw ParameterError("Besov p must lie in (0, inf)");
  if (!(q > 0) || std::isnan(q)) throw ParameterError("Besov q must lie in (0, inf]");
  if (!std::isfinite(tau)) throw ParameterError("Besov tau must be finite");
  if (d < 1) throw ParameterError("Besov d must be >= 1");
}

double BesovParams::level_weight(int j) const { return std::exp2(j * (tau - d / p)); }

double besov_seq_norm(const WaveletCoeffs& coeffs, const BesovParams& params) {
  params.validate();
  if (params.d != coeffs.dimension()) throw ShapeError("Besov d does not match the coefficient dimension");
  const auto values = coeffs.values();
  const bool q_inf = std::isinf(params.q);
  double total = 0;
  for (const auto& b : coeffs.bands()) {
    double sp = 0;
    for (std::size_t i = 0; i < b.count; ++i) sp += std::pow(std::abs(values[b.offset + i]), params.p);
    const double level_norm = params.level_weight(b.j) * std::pow(sp, 1.0 / params.p);
    total = q_inf ? std::max(total, level_norm) : total + std::pow(level_norm, params.q);
  }
  return q_inf ? total : std::pow(total, 1.0 / params.q);
}

std::vector<double> weighted_magnitudes(const WaveletCoeffs& coeffs, const BesovParams& params) {
  params.validate();
  if (params.d != coeffs.dimension()) throw ShapeError("Besov d does not match the coefficient dimension");
  std::vector<double> out(coeffs.size());
  const auto values = coeffs.values();
  for (const auto& b : coeffs.bands()) {
    const double w = params.level_weight(b.j);
    for (std::size_t i = 0; i < b.count; ++i) out[b.offset + i] = w * std::abs(values[b.offset + i]);
  }
  return out;
}

NTermResult best_n_term(std::span<const double> weighted, double p, std::size_t n) {
  check_p(p);
  const auto order = descending_order(weighted);
  const std::size_t keep = std::min(n, order.size());
  double tail = 0;
  for (std::size_t i = order.size(); i-- > keep;) tail += std::pow(weighted[order[i]], p);
  return {std::vector<std::size_t>(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep)),
          std::pow(tail, 1.0 / p)};
}

NTermResult best_n_term(const WaveletCoeffs& coeffs, const BesovParams& params, std::size_t n) {
  return best_n_term(weighted_magnitudes(coeffs, params), params.p, n);
}

DecayCurve sigma_curve(std::span<const double> weighted, double p, std::span<const std::size_t> n_grid) {
  check_p(p);
  if (!std::is_sorted(n_grid.begin(), n_grid.end())) throw ParameterError("n grid must be ascending");
  const auto order = descending_order(weighted);
  const auto tail = tail_sums(weighted, order, p);
  DecayCurve curve;
  curve.params.p = curve.params.q = p;
  curve.n.assign(n_grid.begin(), n_grid.end());
  curve.sigma.reserve(n_grid.size());
  for (std::size_t n : n_grid) curve.sigma.push_back(std::pow(tail[std::min(n, order.size())], 1.0 / p));
  return curve;
}

DecayCurve sigma_curve(const WaveletCoeffs& coeffs, const BesovParams& params, std::span<const std::size_t> n_grid) {
  DecayCurve curve = sigma_curve(weighted_magnitudes(coeffs, params), params.p, n_grid);
  curve.params = params;
  curve.params.q = params.p;
  return curve;
}

std::vector<std::size_t> dyadic_grid(int lo, int hi) {
  if (lo < 0 || hi < lo || hi > 62) throw ParameterError("invalid dyadic grid exponents");
  std::vector<std::size_t> out;
  for (int e = lo; e <= hi; ++e) out.push_back(std::size_t{1} << e);
  return out;
}

KappaFit estimate_kappa(const DecayCurve& curve, FitRange range) {
  if (curve.n.size() != curve.sigma.size()) throw ShapeError("decay curve arrays differ in length");
  std::vector<std::size_t> idx;
  bool saw_zero = false;
  for (std::size_t i = 0; i < curve.n.size(); ++i) {
    const auto n = static_cast<double>(curve.n[i]);
    if (n < range.n_lo || n > range.n_hi || n <= 0) continue;
    if (curve.sigma[i] > 0) {
      idx.push_back(i);
    } else {
      saw_zero = true;
    }
  }
  if (idx.size() < 5) {
    if (saw_zero) return KappaFit::infinite_sentinel(range);
    throw FitError("estimate_kappa needs at least 5 points with sigma > 0 in [" + std::to_string(range.n_lo) + ", " +
                   std::to_string(range.n_hi) + "], got " + std::to_string(idx.size()));
  }
  // Normalizing by the first value makes the slope independent of an overall scale.
  const double ref = curve.sigma[idx.front()];
  std::vector<double> x, y;
  for (std::size_t i : idx) {
    x.push_back(std::log(static_cast<double>(curve.n[i])));
    y.push_back(-std::log(curve.sigma[i] / ref));
  }
  const LineFit fit = least_squares(x, y);
  return KappaFit{fit.slope, fit.slope_se, range, idx.size(), false};
}

RegularityScan empirical_regularity_scan(const WaveletCoeffs& coeffs, std::span<const double> p_grid,
                                         std::span<const double> tau_grid) {
  const int depth = coeffs.max_j() - coeffs.min_j() + 1;
  if (depth < 6) throw ShapeError("regularity scan needs at least 6 detail levels, got " + std::to_string(depth));
  for (double p : p_grid) check_p(p);
  const int d = coeffs.dimension();
  const auto values = coeffs.values();

  RegularityScan scan;
  scan.p_grid.assign(p_grid.begin(), p_grid.end());
  scan.tau_grid.assign(tau_grid.begin(), tau_grid.end());
  for (double p : p_grid) {
    std::vector<double> sums(static_cast<std::size_t>(depth), 0.0);
    for (const auto& b : coeffs.bands()) {
      if (b.gender == 0) continue;
      double& s = sums[static_cast<std::size_t>(b.j - coeffs.min_j())];
      for (std::size_t i = 0; i < b.count; ++i) s += std::pow(std::abs(values[b.offset + i]), p);
    }
    std::vector<double> slopes_for_p;
    for (double tau : tau_grid) {
      std::vector<double> x, y;
      for (int k = 0; k < depth; ++k) {
        if (!(sums[k] > 0)) continue;
        const int j = coeffs.min_j() + k;
        x.push_back(j);
        y.push_back(j * (tau - d / p) + std::log2(sums[k]) / p);
      }
      const double slope = x.size() >= 2 ? least_squares(x, y).slope : std::numeric_limits<double>::quiet_NaN();
      slopes_for_p.push_back(slope);
      scan.slopes.push_back(slope);
    }
    double crit = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i + 1 < tau_grid.size(); ++i) {
      const double a = slopes_for_p[i], b = slopes_for_p[i + 1];
      if (a == 0) {
        crit = tau_grid[i];
        break;
      }
      if ((a < 0) != (b < 0) && std::isfinite(a) && std::isfinite(b)) {
        crit = tau_grid[i] + (tau_grid[i + 1] - tau_grid[i]) * (-a) / (b - a);
        break;
      }
    }
    scan.critical_tau.push_back(crit);
  }
  return scan;
}

}  // namespace levy
