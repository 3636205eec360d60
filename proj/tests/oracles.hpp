#pragma once

// Test-only reference computations. Nothing here calls into the code paths
// it is used to check.

#include <algorithm>
#include <bit>
#include <complex>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

namespace oracle {

/// Smallest residual (sum of dropped v^p)^(1/p) over all n-subsets kept, by
/// enumeration. Dropped terms are summed in ascending order.
inline double exhaustive_n_term(const std::vector<double>& v, double p, std::size_t n) {
  const std::size_t size = v.size();
  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 0; mask < (1u << size); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) != std::min(n, size)) continue;
    std::vector<double> dropped;
    for (std::size_t i = 0; i < size; ++i) {
      if (!((mask >> i) & 1u)) dropped.push_back(v[i]);
    }
    std::sort(dropped.begin(), dropped.end());
    double s = 0;
    for (double x : dropped) s += std::pow(x, p);
    best = std::min(best, std::pow(s, 1.0 / p));
  }
  return best;
}

/// Two-sample Kolmogorov-Smirnov statistic.
inline double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(double(i) / a.size() - double(j) / b.size()));
  }
  return d;
}

/// 1% critical value of the two-sample KS statistic (asymptotic).
inline double ks_critical_1pct(std::size_t n, std::size_t m) {
  return 1.628 * std::sqrt(double(n + m) / (double(n) * double(m)));
}

/// Ordinary least-squares slope.
inline double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = double(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  return sxy / sxx;
}

/// Naive O(N^2) DFT coefficient cellVolume * sum f_k exp(-2 pi i m k / N), d = 1.
inline std::complex<double> naive_fourier(const std::vector<double>& f, int m) {
  const double n = double(f.size());
  std::complex<double> acc = 0;
  for (std::size_t k = 0; k < f.size(); ++k) acc += f[k] * std::polar(1.0, -2 * M_PI * m * double(k) / n);
  return acc / n;
}

}  // namespace oracle
