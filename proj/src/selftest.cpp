#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <complex>
#include <sstream>

#include "levy/harness.hpp"
#include "levy/rng.hpp"
#include "levy/sampling.hpp"
#include "levy/spectral.hpp"
#include "levy/wavelets.hpp"

namespace levy {

namespace {

double rel_error(std::span<const double> a, std::span<const double> b) {
  double num = 0, den = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  return std::sqrt(num / den);
}

std::vector<double> random_field(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = rng.normal();
  return v;
}

SelfTestResult check_wavelets() {
  double worst = 0;
  for (int k : {1, 2, 4}) {
    const WaveletSpec spec(k);
    for (int d : {1, 2}) {
      const GridSpec grid{d, spec.zeta() + 3};
      const auto f = random_field(grid.total_cells(), 17 + k * 3 + d);
      const auto c = dwt_periodic(grid, f, spec);
      worst = std::max(worst, rel_error(idwt_periodic(c, spec), f));
      double energy = 0, coeff_energy = 0;
      for (double x : f) energy += x * x * grid.cell_volume();
      for (const auto& b : c.bands()) {
        const double s = std::ldexp(1.0, -b.dyadic_level * d);
        for (double l : c.band(b.j, b.gender)) coeff_energy += l * l * s;
      }
      worst = std::max(worst, std::abs(coeff_energy - energy) / energy);
    }
  }
  std::ostringstream os;
  os << "max relative error " << worst;
  return {"wavelet reconstruction and Parseval", worst < 1e-10, os.str()};
}

SelfTestResult check_greedy() {
  Rng rng(99);
  int mismatches = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t size = 1 + rng.next_u64() % 10;
    const double p = trial % 2 ? 1.0 : 2.0;
    std::vector<double> w(size);
    for (auto& x : w) x = rng.uniform();
    const std::size_t n = rng.next_u64() % (size + 1);
    double best = std::numeric_limits<double>::infinity();
    for (std::uint32_t mask = 0; mask < (1u << size); ++mask) {
      if (static_cast<std::size_t>(std::popcount(mask)) != n) continue;
      std::vector<double> dropped;
      for (std::size_t i = 0; i < size; ++i) {
        if (!(mask >> i & 1u)) dropped.push_back(w[i]);
      }
      std::sort(dropped.begin(), dropped.end());
      double s = 0;
      for (double x : dropped) s += std::pow(x, p);
      best = std::min(best, std::pow(s, 1.0 / p));
    }
    if (best_n_term(w, p, n).residual != best) ++mismatches;
  }
  return {"greedy n-term equals exhaustive search", mismatches == 0, std::to_string(mismatches) + " mismatches"};
}

SelfTestResult check_sampler() {
  const std::vector<LevyExponent> families{LevyExponent::gaussian(), LevyExponent::stable(1.5), LevyExponent::cauchy(),
                                           LevyExponent::compound_poisson(1.0), LevyExponent::laplace(),
                                           LevyExponent::inverse_gaussian()};
  const std::size_t m = std::size_t{1} << 14;
  const double h = 1.0 / 1024;
  double worst = 0;
  for (const auto& e : families) {
    const auto x = sample_increments(e, h, m, 5);
    for (double xi : {0.5, 1.0, 2.0, 5.0, 10.0}) {
      worst = std::max(worst, std::abs(empirical_cf(x, xi) - std::exp(h * e.psi(xi))));
    }
  }
  const double bound = 4.0 / std::sqrt(static_cast<double>(m));
  std::ostringstream os;
  os << "max |ECF - exp(h psi)| = " << worst << " (bound " << bound << ")";
  return {"increment characteristic functions", worst <= bound, os.str()};
}

SelfTestResult check_spectral() {
  const GridSpec grid{2, 6};
  auto f = random_field(grid.total_cells(), 3);
  double mean = 0;
  for (double x : f) mean += x / static_cast<double>(f.size());
  for (auto& x : f) x -= mean;
  const auto sym = OperatorSymbol::matern(1.5);
  const auto back = inverse_fft(apply_forward_operator(apply_inverse_operator(forward_fft(grid, f), sym), sym));
  const double err = rel_error(back, f);
  std::ostringstream os;
  os << "relative error " << err;
  return {"spectral operator round trip", err < 1e-12, os.str()};
}

}  // namespace

std::vector<SelfTestResult> run_selftest() {
  return {check_wavelets(), check_greedy(), check_sampler(), check_spectral()};
}

}  // namespace levy
