#include <cmath>
#include <numbers>
#include <numeric>

#include "doctest.h"
#include "levy/error.hpp"
#include "levy/rng.hpp"
#include "levy/spectral.hpp"
#include "oracles.hpp"

using namespace levy;

namespace {

std::vector<double> zero_mean_random(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = rng.normal();
  const double m = std::accumulate(v.begin(), v.end(), 0.0) / n;
  for (auto& x : v) x -= m;
  return v;
}

double rel_err(const std::vector<double>& a, const std::vector<double>& b) {
  double num = 0, den = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  return std::sqrt(num / den);
}

SpectralField single_mode(const GridSpec& grid, std::vector<int> m) {
  SpectralField s{grid, std::vector<std::complex<double>>(grid.total_cells())};
  s.coeffs[s.index_of(m)] = 1.0;
  return s;
}

}  // namespace

TEST_CASE("forward transform conventions") {
  const GridSpec grid{1, 6};
  const std::size_t n = grid.cells_per_axis();

  SUBCASE("constant field has empty spectrum") {
    const auto s = forward_fft(grid, std::vector<double>(n, 3.5));
    for (auto c : s.coeffs) CHECK(std::abs(c) < 1e-14);
  }
  SUBCASE("cos(2 pi x)") {
    std::vector<double> f(n);
    for (std::size_t k = 0; k < n; ++k) f[k] = std::cos(2 * std::numbers::pi * k / double(n));
    const auto s = forward_fft(grid, f);
    for (std::size_t i = 0; i < n; ++i) {
      const int m = SpectralField::frequency(i, n);
      const double expect = (m == 1 || m == -1) ? 0.5 : 0.0;
      CHECK(std::abs(s.coeffs[i] - expect) < 1e-12);
    }
  }
  SUBCASE("agrees with a naive DFT") {
    const auto f = zero_mean_random(n, 4);
    const auto s = forward_fft(grid, f);
    for (int m : {1, 2, 5, -7, -32, 31}) {
      CHECK(std::abs(s.coeffs[s.index_of(std::vector<int>{m})] - oracle::naive_fourier(f, m)) < 1e-12);
    }
  }
}

TEST_CASE("Parseval and conjugate symmetry") {
  for (int d : {1, 2}) {
    const GridSpec grid{d, d == 1 ? 10 : 5};
    const auto f = zero_mean_random(grid.total_cells(), 10 + d);
    const auto s = forward_fft(grid, f);
    double lhs = 0, rhs = 0;
    for (auto c : s.coeffs) lhs += std::norm(c);
    for (double x : f) rhs += x * x * grid.cell_volume();
    CHECK(std::abs(lhs - rhs) <= 1e-12 * rhs);
    CHECK(s.coeffs[0] == std::complex<double>(0, 0));
    const std::size_t n = grid.cells_per_axis();
    for (std::size_t i = 1; i < s.coeffs.size(); i += 7) {
      std::size_t mirror;
      if (d == 1) {
        mirror = (n - i) % n;
      } else {
        mirror = ((n - i / n) % n) * n + (n - i % n) % n;
      }
      CHECK(std::abs(s.coeffs[mirror] - std::conj(s.coeffs[i])) < 1e-14);
    }
  }
}

TEST_CASE("FFT round trip") {
  for (int d : {1, 2}) {
    const GridSpec grid{d, d == 1 ? 12 : 6};
    const auto f = zero_mean_random(grid.total_cells(), 20 + d);
    CHECK(rel_err(inverse_fft(forward_fft(grid, f)), f) < 1e-12);
  }
}

TEST_CASE("operator symbols") {
  const std::vector<int> m34{3, 4};
  CHECK(OperatorSymbol::fractional_laplacian(2)(m34).real() == doctest::Approx(25));
  CHECK(OperatorSymbol::matern(2)(std::vector<int>{1, 0}).real() == doctest::Approx(2));
  CHECK(OperatorSymbol::fractional_laplacian(0.5)(std::vector<int>{2}).real() == doctest::Approx(std::sqrt(2.0)));
  // D^2 + 3 at m = 1: (2 pi i)^2 + 3.
  const auto dsym = OperatorSymbol::derivative({3.0, 0.0})(std::vector<int>{1});
  CHECK(dsym.real() == doctest::Approx(3 - 4 * std::numbers::pi * std::numbers::pi));
  CHECK(dsym.imag() == doctest::Approx(0));
  CHECK_THROWS_AS(OperatorSymbol::fractional_laplacian(0), ParameterError);
  CHECK_THROWS_AS(OperatorSymbol::matern(-1), ParameterError);
  CHECK_THROWS_AS(OperatorSymbol::derivative({}), ParameterError);
}

TEST_CASE("apply inverse and forward operators") {
  SUBCASE("d = 1, gamma = 1, unit mode at m = 1") {
    const GridSpec grid{1, 4};
    const auto s = apply_inverse_operator(single_mode(grid, {1}), OperatorSymbol::fractional_laplacian(1));
    CHECK(std::abs(s.coeffs[s.index_of(std::vector<int>{1})] - 1.0) < 1e-15);
  }
  SUBCASE("d = 2, gamma = 2, mode (3, 4)") {
    const GridSpec grid{2, 4};
    const auto s = apply_inverse_operator(single_mode(grid, {3, 4}), OperatorSymbol::fractional_laplacian(2));
    CHECK(s.coeffs[s.index_of(std::vector<int>{3, 4})].real() == doctest::Approx(1.0 / 25));
  }
  SUBCASE("Matern gamma = 2 on mode (1, 0)") {
    const GridSpec grid{2, 3};
    const auto s = apply_forward_operator(single_mode(grid, {1, 0}), OperatorSymbol::matern(2));
    CHECK(s.coeffs[s.index_of(std::vector<int>{1, 0})].real() == doctest::Approx(2.0));
  }
  SUBCASE("fractional Laplacian gamma = 0.5 on mode 2") {
    const GridSpec grid{1, 4};
    const auto s = apply_forward_operator(single_mode(grid, {2}), OperatorSymbol::fractional_laplacian(0.5));
    CHECK(s.coeffs[2].real() == doctest::Approx(std::sqrt(2.0)));
  }
  SUBCASE("Nyquist row uses the signed representative") {
    const GridSpec grid{2, 3};
    const auto s = apply_forward_operator(single_mode(grid, {-4, 3}), OperatorSymbol::fractional_laplacian(2));
    CHECK(s.coeffs[s.index_of(std::vector<int>{-4, 3})].real() == doctest::Approx(25.0));
  }
  SUBCASE("zero field") {
    const GridSpec grid{1, 5};
    SpectralField z{grid, std::vector<std::complex<double>>(32)};
    for (auto c : apply_forward_operator(z, OperatorSymbol::matern(1.3)).coeffs) CHECK(c == 0.0);
  }
  SUBCASE("forward then inverse is the identity") {
    for (int d : {1, 2}) {
      const GridSpec grid{d, d == 1 ? 11 : 6};
      const auto f = zero_mean_random(grid.total_cells(), 30 + d);
      const auto s = forward_fft(grid, f);
      for (const auto& sym : {OperatorSymbol::fractional_laplacian(1.7), OperatorSymbol::matern(0.6)}) {
        const auto back = apply_inverse_operator(apply_forward_operator(s, sym), sym);
        double num = 0, den = 0;
        for (std::size_t i = 0; i < s.coeffs.size(); ++i) {
          num += std::norm(back.coeffs[i] - s.coeffs[i]);
          den += std::norm(s.coeffs[i]);
        }
        CHECK(std::sqrt(num / den) < 1e-12);
      }
    }
  }
  SUBCASE("vanishing symbol names the lattice point") {
    // D^2 + 4 pi^2 vanishes at m = +-1.
    const auto sym = OperatorSymbol::derivative({4 * std::numbers::pi * std::numbers::pi, 0.0});
    const GridSpec grid{1, 4};
    const auto s = forward_fft(grid, zero_mean_random(16, 1));
    try {
      (void)apply_inverse_operator(s, sym);
      FAIL("expected AdmissibilityError");
    } catch (const AdmissibilityError& e) {
      CHECK(std::string(e.what()).find("m = (1)") != std::string::npos);
    }
  }
  SUBCASE("derivative operators are one-dimensional") {
    const GridSpec grid{2, 3};
    CHECK_THROWS_AS(apply_inverse_operator(single_mode(grid, {1, 1}), OperatorSymbol::derivative({1.0})),
                    ParameterError);
  }
}

TEST_CASE("synthesize_process") {
  const GridSpec grid{1, 12};
  const auto sym = OperatorSymbol::fractional_laplacian(1);
  for (const auto& e : {LevyExponent::gaussian(), LevyExponent::cauchy(), LevyExponent::compound_poisson(2)}) {
    const auto a = synthesize_process(e, grid, sym, 5);
    const auto b = synthesize_process(e, grid, sym, 5);
    CHECK(a.values == b.values);
    double mean = 0, sq = 0;
    for (double x : a.values) {
      mean += x;
      sq += x * x;
    }
    mean /= a.values.size();
    CHECK(std::abs(mean) <= 1e-12 * std::sqrt(sq / a.values.size()) + 1e-300);
    double peak = 0;
    for (double x : a.values) peak = std::max(peak, std::abs(x));
    CHECK(a.imaginary_residue <= 1e-12 * peak + 1e-300);
  }
  const auto f2 = synthesize_process(LevyExponent::stable(1.2), GridSpec{2, 6}, OperatorSymbol::matern(1.5), 9);
  double peak = 0;
  for (double x : f2.values) peak = std::max(peak, std::abs(x));
  CHECK(f2.imaginary_residue <= 1e-12 * peak);
}

TEST_CASE("Gaussian process power spectrum decays as |m|^{-2 gamma}") {
  // Oracle: white noise has a flat spectrum, so E|s(m)|^2 = E|w(m)|^2 |m|^{-2 gamma}.
  const GridSpec grid{1, 10};
  const std::size_t n = grid.cells_per_axis();
  for (double gamma : {0.75, 1.0, 1.5}) {
    std::vector<double> power(n / 8 + 1, 0.0);
    for (int t = 0; t < 50; ++t) {
      const auto s = synthesize_process(LevyExponent::gaussian(), grid, OperatorSymbol::fractional_laplacian(gamma),
                                        derive_seed(123, t));
      const auto spec = forward_fft(grid, s.values);
      for (std::size_t m = 2; m <= n / 8; ++m) power[m] += std::norm(spec.coeffs[m]);
    }
    std::vector<double> x, y;
    for (std::size_t m = 2; m <= n / 8; ++m) {
      x.push_back(std::log(double(m)));
      y.push_back(std::log(power[m] / 50));
    }
    CAPTURE(gamma);
    CHECK(std::abs(oracle::ols_slope(x, y) + 2 * gamma) < 0.1);
  }
}
