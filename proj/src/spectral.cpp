#include "levy/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>

#include "levy/error.hpp"

namespace levy {

namespace {

// The FFTW planner is not reentrant; execution of a finished plan is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void fft_in_place(const GridSpec& grid, std::vector<std::complex<double>>& data, int sign) {
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  const int n = static_cast<int>(grid.cells_per_axis());
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = grid.d == 1 ? fftw_plan_dft_1d(n, buf, buf, sign, FFTW_ESTIMATE)
                       : fftw_plan_dft_2d(n, n, buf, buf, sign, FFTW_ESTIMATE);
  }
  if (plan == nullptr) throw Error("FFTW failed to create a plan");
  fftw_execute(plan);
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(plan);
}

std::string format_frequency(std::span<const int> m) {
  std::ostringstream os;
  os << '(';
  for (std::size_t r = 0; r < m.size(); ++r) os << (r ? "," : "") << m[r];
  os << ')';
  return os.str();
}

template <class Op>
SpectralField apply_symbol(const SpectralField& in, const OperatorSymbol& symbol, Op op) {
  if (symbol.kind() == OperatorSymbol::Kind::Derivative1D && in.grid.d != 1) {
    throw ParameterError("derivative operators are defined for d = 1 only");
  }
  SpectralField out = in;
  const std::size_t n = in.grid.cells_per_axis();
  std::array<int, 2> m{};
  const std::span<const int> mm(m.data(), static_cast<std::size_t>(in.grid.d));
  for (std::size_t i = 0; i < out.coeffs.size(); ++i) {
    if (i == 0) {
      out.coeffs[0] = 0.0;
      continue;
    }
    if (in.grid.d == 1) {
      m[0] = SpectralField::frequency(i, n);
    } else {
      m[0] = SpectralField::frequency(i / n, n);
      m[1] = SpectralField::frequency(i % n, n);
    }
    const std::complex<double> value = symbol(mm);
    if (value == 0.0) {
      throw AdmissibilityError("operator symbol vanishes at m = " + format_frequency(mm));
    }
    out.coeffs[i] = op(out.coeffs[i], value);
  }
  return out;
}

}  // namespace

std::size_t SpectralField::index_of(std::span<const int> m) const {
  if (m.size() != static_cast<std::size_t>(grid.d)) throw ShapeError("frequency has wrong dimension");
  const auto n = static_cast<long>(grid.cells_per_axis());
  std::size_t idx = 0;
  for (int c : m) {
    if (c < -n / 2 || c >= n / 2) throw ShapeError("frequency outside [-N/2, N/2)");
    idx = idx * n + static_cast<std::size_t>((c + n) % n);
  }
  return idx;
}

OperatorSymbol OperatorSymbol::fractional_laplacian(double gamma) {
  if (!(gamma > 0) || !std::isfinite(gamma)) throw ParameterError("fractional Laplacian order must be > 0");
  return {Kind::FractionalLaplacian, gamma, {}};
}

OperatorSymbol OperatorSymbol::matern(double gamma) {
  if (!(gamma > 0) || !std::isfinite(gamma)) throw ParameterError("Matern order must be > 0");
  return {Kind::Matern, gamma, {}};
}

OperatorSymbol OperatorSymbol::derivative(std::vector<double> lower) {
  if (lower.empty()) throw ParameterError("derivative operator needs order >= 1");
  for (double a : lower) {
    if (!std::isfinite(a)) throw ParameterError("derivative coefficients must be finite");
  }
  const auto order = static_cast<double>(lower.size());
  return {Kind::Derivative1D, order, std::move(lower)};
}

std::complex<double> OperatorSymbol::operator()(std::span<const int> m) const {
  double norm2 = 0;
  for (int c : m) norm2 += static_cast<double>(c) * c;
  switch (kind_) {
    case Kind::FractionalLaplacian: return std::pow(norm2, order_ / 2);
    case Kind::Matern: return std::pow(1.0 + norm2, order_ / 2);
    case Kind::Derivative1D: {
      if (m.size() != 1) throw ParameterError("derivative operators are defined for d = 1 only");
      const std::complex<double> s(0, 2 * std::numbers::pi * m[0]);
      // Horner on the monic polynomial.
      std::complex<double> acc = 1.0;
      for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * s + *it;
      return acc;
    }
  }
  return 0.0;
}

SpectralField forward_fft(const GridSpec& grid, std::span<const double> values) {
  grid.validate();
  if (values.size() != grid.total_cells()) throw ShapeError("field size does not match grid");
  SpectralField out{grid, std::vector<std::complex<double>>(values.begin(), values.end())};
  fft_in_place(grid, out.coeffs, FFTW_FORWARD);
  const double h = grid.cell_volume();
  for (auto& c : out.coeffs) c *= h;
  out.coeffs[0] = 0.0;
  return out;
}

std::vector<std::complex<double>> inverse_fft_complex(const SpectralField& field) {
  field.grid.validate();
  if (field.coeffs.size() != field.grid.total_cells()) throw ShapeError("spectrum size does not match grid");
  auto data = field.coeffs;
  fft_in_place(field.grid, data, FFTW_BACKWARD);
  return data;
}

std::vector<double> inverse_fft(const SpectralField& field) {
  const auto data = inverse_fft_complex(field);
  std::vector<double> out(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) out[i] = data[i].real();
  return out;
}

SpectralField apply_inverse_operator(const SpectralField& noise, const OperatorSymbol& symbol) {
  return apply_symbol(noise, symbol, [](std::complex<double> c, std::complex<double> l) { return c / l; });
}

SpectralField apply_forward_operator(const SpectralField& field, const OperatorSymbol& symbol) {
  return apply_symbol(field, symbol, [](std::complex<double> c, std::complex<double> l) { return c * l; });
}

ProcessField synthesize_process(const LevyExponent& e, const GridSpec& grid, const OperatorSymbol& symbol,
                                std::uint64_t seed) {
  const NoiseField noise = generate_noise(e, grid, seed);
  const SpectralField spectrum = apply_inverse_operator(forward_fft(noise), symbol);
  const auto data = inverse_fft_complex(spectrum);
  ProcessField out{grid, std::vector<double>(data.size()), 0.0};
  double mean = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    out.values[i] = data[i].real();
    out.imaginary_residue = std::max(out.imaginary_residue, std::abs(data[i].imag()));
    mean += out.values[i];
  }
  // DC is already zero; this removes the rounding residue.
  mean /= static_cast<double>(data.size());
  for (auto& v : out.values) v -= mean;
  return out;
}

}  // namespace levy
