#include "levy/sampling.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>

#include "levy/error.hpp"
#include "levy/rng.hpp"

namespace levy {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

// Standard symmetric stable draw, E exp(i xi X) = exp(-|xi|^alpha)
// (Chambers-Mallows-Stuck with zero skew).
double standard_sas(double alpha, Rng& rng) {
  const double v = std::numbers::pi * (rng.uniform() - 0.5);
  if (alpha == 1.0) return std::tan(v);
  const double w = -std::log(rng.uniform());
  return std::sin(alpha * v) / std::pow(std::cos(v), 1.0 / alpha) *
         std::pow(std::cos(v - alpha * v) / w, (1.0 - alpha) / alpha);
}

// Michael-Schucany-Haas transformation for IG(mean, shape).
double inverse_gaussian_msh(double mean, double shape, Rng& rng) {
  const double nu = rng.normal();
  const double r = mean * nu * nu / (2.0 * shape);
  const double x1 = mean / (1.0 + r + std::sqrt(r * r + 2.0 * r));
  if (rng.uniform() * (mean + x1) <= mean) return x1;
  return mean * (mean / x1);
}

}  // namespace

void GridSpec::validate() const {
  if (d != 1 && d != 2) throw ParameterError("grid dimension must be 1 or 2, got " + std::to_string(d));
  if (level < 1) throw ParameterError("grid level must be >= 1, got " + std::to_string(level));
  if (level * d > kMaxLog2Cells) {
    throw ParameterError("grid of 2^" + std::to_string(level * d) + " cells exceeds the 2^26 memory guard");
  }
}

double sample_id_increment(const LevyExponent& e, double volume, Rng& rng) {
  if (!(volume > 0) || !std::isfinite(volume)) throw ParameterError("increment volume must be > 0");
  using E = LevyExponent;
  return std::visit(
      overloaded{
          [&](const E::Gaussian& g) { return std::sqrt(g.sigma2 * volume) * rng.normal(); },
          [&](const E::SymmetricStable& s) { return std::pow(volume, 1.0 / s.alpha) * standard_sas(s.alpha, rng); },
          [&](const E::CompoundPoisson& c) {
            const std::uint64_t jumps = rng.poisson(c.rate * volume);
            double sum = 0;
            for (std::uint64_t i = 0; i < jumps; ++i) sum += c.jump.sample(rng);
            return sum;
          },
          [&](const E::Laplace&) { return rng.gamma(volume) - rng.gamma(volume); },
          [&](const E::InverseGaussian& ig) {
            return inverse_gaussian_msh(ig.delta * volume / ig.gamma, ig.delta * ig.delta * volume * volume, rng);
          },
      },
      e.params());
}

std::vector<double> sample_increments(const LevyExponent& e, double volume, std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> out(count);
  for (auto& x : out) x = sample_id_increment(e, volume, rng);
  return out;
}

NoiseField generate_noise(const LevyExponent& e, const GridSpec& grid, std::uint64_t seed) {
  grid.validate();
  const double h = grid.cell_volume();
  NoiseField field{grid, sample_increments(e, h, grid.total_cells(), seed), seed, e.tag()};
  for (auto& v : field.values) v /= h;
  const double mean = std::accumulate(field.values.begin(), field.values.end(), 0.0) / field.values.size();
  for (auto& v : field.values) v -= mean;
  return field;
}

std::complex<double> empirical_cf(std::span<const double> samples, double xi) {
  double re = 0, im = 0;
  for (double x : samples) {
    re += std::cos(xi * x);
    im += std::sin(xi * x);
  }
  const double m = static_cast<double>(samples.size());
  return {re / m, im / m};
}

namespace {

constexpr std::array<char, 4> kMagic{'L', 'V', 'N', 'F'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put_le(std::ostream& os, T value) {
  auto bits = std::bit_cast<std::array<unsigned char, sizeof(T)>>(value);
  if constexpr (std::endian::native == std::endian::big) std::reverse(bits.begin(), bits.end());
  os.write(reinterpret_cast<const char*>(bits.data()), bits.size());
}

template <class T>
T get_le(std::istream& is) {
  std::array<unsigned char, sizeof(T)> bits{};
  is.read(reinterpret_cast<char*>(bits.data()), bits.size());
  if (!is) throw IoError("noise field: truncated input");
  if constexpr (std::endian::native == std::endian::big) std::reverse(bits.begin(), bits.end());
  return std::bit_cast<T>(bits);
}

}  // namespace

void write_noise_field(std::ostream& os, const NoiseField& field) {
  os.write(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(os, kVersion);
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(field.grid.d));
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(field.grid.level));
  put_le<std::uint64_t>(os, field.seed);
  put_le<std::uint64_t>(os, field.values.size());
  for (double v : field.values) put_le<double>(os, v);
  if (!os) throw IoError("noise field: write failed");
}

void write_noise_field(const std::filesystem::path& path, const NoiseField& field) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
  write_noise_field(os, field);
}

NoiseField read_noise_field(std::istream& is) {
  std::array<char, 4> magic{};
  is.read(magic.data(), magic.size());
  if (!is || magic != kMagic) throw IoError("noise field: bad magic");
  if (get_le<std::uint32_t>(is) != kVersion) throw IoError("noise field: unsupported version");
  NoiseField field;
  field.grid.d = static_cast<int>(get_le<std::uint32_t>(is));
  field.grid.level = static_cast<int>(get_le<std::uint32_t>(is));
  field.seed = get_le<std::uint64_t>(is);
  const auto count = get_le<std::uint64_t>(is);
  try {
    field.grid.validate();
  } catch (const ParameterError& err) {
    throw IoError(std::string("noise field: ") + err.what());
  }
  if (count != field.grid.total_cells()) throw IoError("noise field: value count does not match grid");
  field.values.resize(count);
  for (auto& v : field.values) v = get_le<double>(is);
  return field;
}

NoiseField read_noise_field(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open '" + path.string() + "' for reading");
  return read_noise_field(is);
}

}  // namespace levy
