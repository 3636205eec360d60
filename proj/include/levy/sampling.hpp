#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "levy/exponents.hpp"

namespace levy {

class Rng;

/// Dyadic discretization of the d-torus: 2^level cells per axis.
struct GridSpec {
  static constexpr int kMaxLog2Cells = 26;

  int d = 1;
  int level = 1;

  /// Throws ParameterError for d outside {1, 2}, level < 1 or more than 2^26 cells.
  void validate() const;

  std::size_t cells_per_axis() const noexcept { return std::size_t{1} << level; }
  std::size_t total_cells() const noexcept { return std::size_t{1} << (level * d); }
  double cell_volume() const noexcept { return std::ldexp(1.0, -level * d); }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// One zero-mean realization of a white noise at grid resolution.
/// values[i] = <w, 1_cell_i> / cellVolume minus the field mean; row-major for d = 2.
struct NoiseField {
  GridSpec grid;
  std::vector<double> values;
  std::uint64_t seed = 0;
  std::string exponent_tag;
};

/// One draw of the infinitely divisible law with characteristic function
/// exp(volume * psi(xi)).
double sample_id_increment(const LevyExponent& e, double volume, Rng& rng);

/// `count` i.i.d. increments of the given volume, before any projection.
std::vector<double> sample_increments(const LevyExponent& e, double volume, std::size_t count, std::uint64_t seed);

/// Noise field on `grid`; bit-identical for identical arguments.
NoiseField generate_noise(const LevyExponent& e, const GridSpec& grid, std::uint64_t seed);

/// Empirical characteristic function (1/M) sum exp(i xi x_k).
std::complex<double> empirical_cf(std::span<const double> samples, double xi);

/// Binary dump: 32-byte little-endian header ("LVNF", version, d, level,
/// seed, count) followed by count float64 values, row-major.
void write_noise_field(std::ostream& os, const NoiseField& field);
void write_noise_field(const std::filesystem::path& path, const NoiseField& field);
NoiseField read_noise_field(std::istream& is);
NoiseField read_noise_field(const std::filesystem::path& path);

}  // namespace levy
