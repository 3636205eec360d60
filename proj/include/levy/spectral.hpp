#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "levy/exponents.hpp"
#include "levy/sampling.hpp"

namespace levy {

/// Fourier coefficients f(m) = integral f(x) exp(-2 pi i m.x) dx of a field on
/// the grid, in FFT storage order (index k <-> signed frequency in [-N/2, N/2)),
/// row-major for d = 2. The DC coefficient is held at zero.
struct SpectralField {
  GridSpec grid;
  std::vector<std::complex<double>> coeffs;

  /// Signed frequency of storage index k along one axis.
  static int frequency(std::size_t k, std::size_t n) noexcept {
    return k < n / 2 ? static_cast<int>(k) : static_cast<int>(k) - static_cast<int>(n);
  }
  std::size_t index_of(std::span<const int> m) const;
};

/// Fourier multiplier of a gamma-admissible operator.
class OperatorSymbol {
 public:
  enum class Kind { FractionalLaplacian, Matern, Derivative1D };

  /// |m|^gamma.
  static OperatorSymbol fractional_laplacian(double gamma);
  /// (1 + |m|^2)^(gamma/2).
  static OperatorSymbol matern(double gamma);
  /// (2 pi i m)^n + sum_{k<n} a_k (2 pi i m)^k with n = lower.size(); d = 1 only.
  static OperatorSymbol derivative(std::vector<double> lower);

  Kind kind() const noexcept { return kind_; }
  double order() const noexcept { return order_; }
  const std::vector<double>& coefficients() const noexcept { return coeffs_; }

  std::complex<double> operator()(std::span<const int> m) const;

 private:
  OperatorSymbol(Kind kind, double order, std::vector<double> coeffs)
      : kind_(kind), order_(order), coeffs_(std::move(coeffs)) {}

  Kind kind_;
  double order_;
  std::vector<double> coeffs_;
};

/// Forward transform of real grid values with the DC term removed.
SpectralField forward_fft(const GridSpec& grid, std::span<const double> values);
inline SpectralField forward_fft(const NoiseField& field) { return forward_fft(field.grid, field.values); }

/// Complex grid values of the inverse transform.
std::vector<std::complex<double>> inverse_fft_complex(const SpectralField& field);
/// Real part of the inverse transform.
std::vector<double> inverse_fft(const SpectralField& field);

/// s(m) = w(m) / L(m) for m != 0. Throws AdmissibilityError naming m if L(m) == 0.
SpectralField apply_inverse_operator(const SpectralField& noise, const OperatorSymbol& symbol);
/// s(m) * L(m); same error regime.
SpectralField apply_forward_operator(const SpectralField& field, const OperatorSymbol& symbol);

/// Real-space realization of s = L^{-1} w: noise, transform, divide, invert.
struct ProcessField {
  GridSpec grid;
  std::vector<double> values;
  /// Largest |Im| of the inverse transform before taking the real part.
  double imaginary_residue = 0.0;
};

ProcessField synthesize_process(const LevyExponent& e, const GridSpec& grid, const OperatorSymbol& symbol,
                                std::uint64_t seed);

}  // namespace levy
