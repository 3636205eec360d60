#include "levy/wavelets.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <fstream>
#include <ostream>

#include "levy/error.hpp"

namespace levy {

namespace {

using cplx = std::complex<double>;

double binomial(int n, int k) {
  double r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Roots of sum_i c[i] y^i via the companion matrix, polished by Newton steps.
std::vector<cplx> polynomial_roots(const std::vector<double>& c) {
  const int deg = static_cast<int>(c.size()) - 1;
  if (deg < 1) return {};
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -c[i] / c[deg];
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  std::vector<cplx> roots(solver.eigenvalues().data(), solver.eigenvalues().data() + deg);
  for (auto& r : roots) {
    for (int it = 0; it < 4; ++it) {
      cplx p = c[deg], dp = 0;
      for (int i = deg - 1; i >= 0; --i) {
        dp = dp * r + p;
        p = p * r + c[i];
      }
      if (dp == 0.0) break;
      r -= p / dp;
    }
  }
  return roots;
}

// One periodic analysis step on x (length L even): first half <- approximation, second half <- detail.
void analyze(std::span<double> x, std::span<const double> h, std::span<const double> g, std::vector<double>& tmp) {
  const std::size_t len = x.size(), half = len / 2;
  tmp.assign(len, 0.0);
  for (std::size_t i = 0; i < half; ++i) {
    double a = 0, d = 0;
    for (std::size_t t = 0; t < h.size(); ++t) {
      const double v = x[(2 * i + t) % len];
      a += h[t] * v;
      d += g[t] * v;
    }
    tmp[i] = a;
    tmp[half + i] = d;
  }
  std::copy(tmp.begin(), tmp.end(), x.begin());
}

void synthesize(std::span<double> x, std::span<const double> h, std::span<const double> g,
                std::vector<double>& tmp) {
  const std::size_t len = x.size(), half = len / 2;
  tmp.assign(len, 0.0);
  for (std::size_t i = 0; i < half; ++i) {
    const double a = x[i], d = x[half + i];
    for (std::size_t t = 0; t < h.size(); ++t) tmp[(2 * i + t) % len] += h[t] * a + g[t] * d;
  }
  std::copy(tmp.begin(), tmp.end(), x.begin());
}

// Applies `step` along both axes of the top-left size x size block of an n x n array.
template <class Step>
void on_block_2d(std::vector<double>& buf, std::size_t n, std::size_t size, Step step) {
  std::vector<double> line(size);
  for (std::size_t r = 0; r < size; ++r) {
    std::copy_n(buf.begin() + r * n, size, line.begin());
    step(std::span<double>(line));
    std::copy_n(line.begin(), size, buf.begin() + r * n);
  }
  for (std::size_t c = 0; c < size; ++c) {
    for (std::size_t r = 0; r < size; ++r) line[r] = buf[r * n + c];
    step(std::span<double>(line));
    for (std::size_t r = 0; r < size; ++r) buf[r * n + c] = line[r];
  }
}

// Offset of gender `gender` within the Mallat layout of block size 2*half (d = 2).
// Gender bit 0 selects the lower half along axis 0 (rows), bit 1 along axis 1.
std::size_t quadrant_origin(std::size_t n, std::size_t half, int gender) {
  return ((gender & 1) ? half * n : 0) + ((gender & 2) ? half : 0);
}

}  // namespace

std::vector<double> daubechies_lowpass(int k) {
  if (k < 1 || k > WaveletSpec::kMaxMoments) throw ParameterError("Daubechies order must lie in [1, 10]");
  std::vector<double> p(k);
  for (int i = 0; i < k; ++i) p[i] = binomial(k - 1 + i, i);

  // H(z) ~ (1 + z)^k prod (z - z_r), z_r the root of z^2 - (2 - 4y) z + 1 inside the unit circle.
  std::vector<cplx> poly{1.0};
  auto multiply = [&](cplx root, cplx lead) {
    std::vector<cplx> next(poly.size() + 1, 0.0);
    for (std::size_t i = 0; i < poly.size(); ++i) {
      next[i] += poly[i] * root;
      next[i + 1] += poly[i] * lead;
    }
    poly = std::move(next);
  };
  for (int i = 0; i < k; ++i) multiply(1.0, 1.0);
  for (cplx y : polynomial_roots(p)) {
    const cplx b = 1.0 - 2.0 * y;
    const cplx s = std::sqrt(b * b - 1.0);
    cplx z = b + s;
    if (std::abs(z) > 1) z = b - s;
    multiply(-z, 1.0);
  }
  std::vector<double> h(poly.size());
  double sum = 0;
  for (std::size_t i = 0; i < poly.size(); ++i) sum += poly[i].real();
  // Reverse into the published ordering and normalize to sum sqrt(2).
  for (std::size_t i = 0; i < poly.size(); ++i) h[i] = poly[poly.size() - 1 - i].real() * std::sqrt(2.0) / sum;
  return h;
}

WaveletSpec::WaveletSpec(int vanishing_moments) : k_(vanishing_moments), zeta_(0) {
  lowpass_ = daubechies_lowpass(k_);
  while ((1 << zeta_) < 2 * k_ - 1) ++zeta_;
  const std::size_t len = lowpass_.size();
  highpass_.resize(len);
  for (std::size_t t = 0; t < len; ++t) highpass_[t] = ((t % 2) ? -1.0 : 1.0) * lowpass_[len - 1 - t];
}

WaveletCoeffs::WaveletCoeffs(int d, int grid_level, int vanishing_moments, int zeta, int base_level)
    : d_(d), grid_level_(grid_level), k_(vanishing_moments), zeta_(zeta), base_level_(base_level) {
  if (d != 1 && d != 2) throw ShapeError("wavelet coefficients need d in {1, 2}");
  if (base_level < zeta || base_level >= grid_level) {
    throw ShapeError("coarsest level " + std::to_string(base_level) + " must lie in [zeta=" + std::to_string(zeta) +
                     ", J-1=" + std::to_string(grid_level - 1) + "]");
  }
  std::size_t offset = 0;
  auto add = [&](int level, int gender) {
    const std::size_t count = std::size_t{1} << (level * d);
    bands_.push_back(Band{level - zeta, gender, level, offset, count});
    offset += count;
  };
  add(base_level, 0);
  for (int level = base_level; level < grid_level; ++level) {
    for (int g = 1; g < (1 << d); ++g) add(level, g);
  }
  values_.assign(offset, 0.0);
}

int WaveletCoeffs::level_of(std::size_t i) const {
  for (const Band& b : bands_) {
    if (i < b.offset + b.count) return b.j;
  }
  throw ShapeError("coefficient index out of range");
}

std::span<const double> WaveletCoeffs::band(int j, int gender) const {
  for (const Band& b : bands_) {
    if (b.j == j && b.gender == gender) return std::span<const double>(values_).subspan(b.offset, b.count);
  }
  throw ShapeError("no band j=" + std::to_string(j) + " gender=" + std::to_string(gender));
}

std::span<double> WaveletCoeffs::band(int j, int gender) {
  auto c = std::as_const(*this).band(j, gender);
  return {values_.data() + (c.data() - values_.data()), c.size()};
}

WaveletCoeffs WaveletCoeffs::zeros_like() const {
  WaveletCoeffs out = *this;
  std::fill(out.values_.begin(), out.values_.end(), 0.0);
  return out;
}

WaveletCoeffs dwt_periodic(const GridSpec& grid, std::span<const double> field, const WaveletSpec& spec, int levels) {
  grid.validate();
  if (field.size() != grid.total_cells()) throw ShapeError("field size does not match grid");
  const int J = grid.level;
  if (levels < 0) levels = spec.max_levels(J);
  if (levels < 1 || J - levels < spec.zeta()) {
    throw ShapeError("cannot take " + std::to_string(levels) + " levels of Daubechies-" +
                     std::to_string(spec.vanishing_moments()) + " on a 2^" + std::to_string(J) + " grid (zeta = " +
                     std::to_string(spec.zeta()) + ")");
  }
  const int base = J - levels;
  const int d = grid.d;
  const std::size_t n = grid.cells_per_axis();

  std::vector<double> buf(field.begin(), field.end());
  const double init = std::ldexp(1.0, -J * d);
  for (auto& v : buf) v *= std::sqrt(init);

  std::vector<double> tmp;
  auto step = [&](std::span<double> x) { analyze(x, spec.lowpass(), spec.highpass(), tmp); };
  for (int level = J; level > base; --level) {
    const std::size_t size = std::size_t{1} << level;
    if (d == 1) {
      step(std::span<double>(buf).first(size));
    } else {
      on_block_2d(buf, n, size, step);
    }
  }

  WaveletCoeffs out(d, J, spec.vanishing_moments(), spec.zeta(), base);
  auto dst = out.values();
  for (const auto& b : out.bands()) {
    const double scale = std::sqrt(std::ldexp(1.0, b.dyadic_level * d));
    const std::size_t side = std::size_t{1} << b.dyadic_level;
    if (d == 1) {
      const std::size_t origin = b.gender == 0 ? 0 : side;
      for (std::size_t i = 0; i < side; ++i) dst[b.offset + i] = scale * buf[origin + i];
    } else {
      const std::size_t origin = quadrant_origin(n, side, b.gender);
      for (std::size_t r = 0; r < side; ++r) {
        for (std::size_t c = 0; c < side; ++c) dst[b.offset + r * side + c] = scale * buf[origin + r * n + c];
      }
    }
  }
  return out;
}

std::vector<double> idwt_periodic(const WaveletCoeffs& coeffs, const WaveletSpec& spec) {
  if (coeffs.vanishing_moments() != spec.vanishing_moments()) {
    throw ShapeError("coefficients were computed with a different wavelet order");
  }
  const int d = coeffs.dimension();
  const int J = coeffs.grid_level();
  const std::size_t n = std::size_t{1} << J;
  std::vector<double> buf(std::size_t{1} << (J * d), 0.0);
  const auto src = coeffs.values();
  for (const auto& b : coeffs.bands()) {
    const double scale = 1.0 / std::sqrt(std::ldexp(1.0, b.dyadic_level * d));
    const std::size_t side = std::size_t{1} << b.dyadic_level;
    if (d == 1) {
      const std::size_t origin = b.gender == 0 ? 0 : side;
      for (std::size_t i = 0; i < side; ++i) buf[origin + i] = scale * src[b.offset + i];
    } else {
      const std::size_t origin = quadrant_origin(n, side, b.gender);
      for (std::size_t r = 0; r < side; ++r) {
        for (std::size_t c = 0; c < side; ++c) buf[origin + r * n + c] = scale * src[b.offset + r * side + c];
      }
    }
  }

  std::vector<double> tmp;
  auto step = [&](std::span<double> x) { synthesize(x, spec.lowpass(), spec.highpass(), tmp); };
  for (int level = coeffs.base_level() + 1; level <= J; ++level) {
    const std::size_t size = std::size_t{1} << level;
    if (d == 1) {
      step(std::span<double>(buf).first(size));
    } else {
      on_block_2d(buf, n, size, step);
    }
  }
  const double init = 1.0 / std::sqrt(std::ldexp(1.0, -J * d));
  for (auto& v : buf) v *= init;
  return buf;
}

std::vector<CoeffEntry> coeff_iter(const WaveletCoeffs& coeffs) {
  std::vector<CoeffEntry> out;
  out.reserve(coeffs.size());
  const auto values = coeffs.values();
  for (const auto& b : coeffs.bands()) {
    const std::size_t side = std::size_t{1} << b.dyadic_level;
    for (std::size_t i = 0; i < b.count; ++i) {
      std::array<int, 2> m{};
      if (coeffs.dimension() == 1) {
        m[0] = static_cast<int>(i);
      } else {
        m[0] = static_cast<int>(i / side);
        m[1] = static_cast<int>(i % side);
      }
      out.push_back(CoeffEntry{b.j, b.gender, m, i, values[b.offset + i]});
    }
  }
  return out;
}

void write_coeffs_csv(std::ostream& os, const WaveletCoeffs& coeffs) {
  const auto old = os.precision(17);
  os << "j,gender,m_flat,lambda\n";
  for (const auto& e : coeff_iter(coeffs)) os << e.j << ',' << e.gender << ',' << e.m_flat << ',' << e.lambda << '\n';
  os.precision(old);
  if (!os) throw IoError("coefficient CSV: write failed");
}

void write_coeffs_csv(const std::filesystem::path& path, const WaveletCoeffs& coeffs) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
  write_coeffs_csv(os, coeffs);
}

}  // namespace levy
