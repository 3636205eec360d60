#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "levy/sampling.hpp"

namespace levy {

/// Orthonormal Daubechies low-pass filter with k vanishing moments (length 2k),
/// sum = sqrt(2), in the usual published ordering (k = 2 starts with (1+sqrt 3)/(4 sqrt 2)).
std::vector<double> daubechies_lowpass(int k);

/// Daubechies-k filter bank together with the coarsest-scale shift zeta, the
/// smallest integer with 2^zeta >= 2k - 1 so that level-0 supports fit in the unit cube.
class WaveletSpec {
 public:
  static constexpr int kMaxMoments = 10;

  /// Throws ParameterError unless 1 <= k <= 10.
  explicit WaveletSpec(int vanishing_moments);

  int vanishing_moments() const noexcept { return k_; }
  int zeta() const noexcept { return zeta_; }
  std::span<const double> lowpass() const noexcept { return lowpass_; }
  std::span<const double> highpass() const noexcept { return highpass_; }

  /// Finest usable decomposition depth on a grid of 2^grid_level cells per axis.
  int max_levels(int grid_level) const noexcept { return grid_level - zeta_; }

 private:
  int k_;
  int zeta_;
  std::vector<double> lowpass_;
  std::vector<double> highpass_;
};

/// Coefficients lambda^{j,G}_m = <f, 2^{(j+zeta)d/2} Psi^{j}_{G,m}>.
///
/// Storage follows coefficient iteration order: the scaling block (gender 0)
/// at the coarsest level, then for each level ascending the genders 1..2^d-1,
/// each a row-major block of 2^{(j+zeta)d} shifts. Gender bit r marks a
/// wavelet (rather than scaling) factor along axis r.
class WaveletCoeffs {
 public:
  struct Band {
    int j;
    int gender;
    /// j + zeta; a band holds 2^dyadic_level shifts per axis.
    int dyadic_level;
    std::size_t offset;
    std::size_t count;
  };

  WaveletCoeffs(int d, int grid_level, int vanishing_moments, int zeta, int base_level);

  int dimension() const noexcept { return d_; }
  int grid_level() const noexcept { return grid_level_; }
  int vanishing_moments() const noexcept { return k_; }
  int zeta() const noexcept { return zeta_; }
  /// Coarsest dyadic level (holds the scaling block).
  int base_level() const noexcept { return base_level_; }
  int min_j() const noexcept { return base_level_ - zeta_; }
  int max_j() const noexcept { return grid_level_ - 1 - zeta_; }

  std::span<const Band> bands() const noexcept { return bands_; }
  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }

  /// Level j of flat position i.
  int level_of(std::size_t i) const;

  /// Block of one (j, G); throws ShapeError if absent.
  std::span<double> band(int j, int gender);
  std::span<const double> band(int j, int gender) const;

  /// Same layout, all values zero.
  WaveletCoeffs zeros_like() const;

 private:
  int d_, grid_level_, k_, zeta_, base_level_;
  std::vector<Band> bands_;
  std::vector<double> values_;
};

/// Periodic orthonormal DWT; grid samples are the level-J scaling
/// coefficients scaled by 2^{-Jd/2}. levels < 0 means the full depth J - zeta.
WaveletCoeffs dwt_periodic(const GridSpec& grid, std::span<const double> field, const WaveletSpec& spec,
                           int levels = -1);

/// Exact inverse of dwt_periodic.
std::vector<double> idwt_periodic(const WaveletCoeffs& coeffs, const WaveletSpec& spec);

struct CoeffEntry {
  int j;
  int gender;
  std::array<int, 2> m;
  std::size_t m_flat;
  double lambda;
};

/// All coefficients in iteration order: j ascending, then gender, then m lexicographic.
std::vector<CoeffEntry> coeff_iter(const WaveletCoeffs& coeffs);

/// CSV with header "j,gender,m_flat,lambda".
void write_coeffs_csv(std::ostream& os, const WaveletCoeffs& coeffs);
void write_coeffs_csv(const std::filesystem::path& path, const WaveletCoeffs& coeffs);

}  // namespace levy
