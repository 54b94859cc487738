#include "korn/random_field.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "korn/error.hpp"

namespace korn {

std::uint64_t sample_seed(std::uint64_t base, std::uint64_t index) {
  // splitmix64 finaliser
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double normal(std::mt19937_64& rng) {
  double u1 = std::max(uniform01(rng), 1e-300);
  double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace

GridField random_band_limited_spectrum(const BoxGrid& grid, int dim, int band, std::uint64_t seed) {
  if (band < 1 || 2 * band >= grid.size())
    throw DimensionError("random_band_limited: band limit " + std::to_string(band) + " not resolved by grid " +
                         std::to_string(grid.size()));
  const int n = grid.n(), size = grid.size();
  const double np = static_cast<double>(grid.num_points());
  std::mt19937_64 rng(seed);
  GridField spec(grid, dim, false);
  std::vector<int> m(n), j(n), jm(n);
  const int width = 2 * band + 1;
  std::size_t total = 1;
  for (int d = 0; d < n; ++d) total *= width;
  for (int c = 0; c < dim; ++c) {
    for (std::size_t t = 0; t < total; ++t) {
      std::size_t r = t;
      for (int d = n - 1; d >= 0; --d) {
        m[d] = static_cast<int>(r % width) - band;
        r /= width;
      }
      // lexicographic sign of m decides which of m, -m draws
      int sgn = 0;
      for (int d = 0; d < n && sgn == 0; ++d) sgn = (m[d] > 0) - (m[d] < 0);
      if (sgn < 0) continue;
      for (int d = 0; d < n; ++d) {
        j[d] = (m[d] + size) % size;
        jm[d] = (-m[d] + size) % size;
      }
      std::size_t i = grid.ravel(j.data()), im = grid.ravel(jm.data());
      if (sgn == 0) {
        spec.at(i, c) = normal(rng) * np;
      } else {
        double re = normal(rng) / std::sqrt(2.0), ii = normal(rng) / std::sqrt(2.0);
        spec.at(i, c) = cplx(re, ii) * np;
        spec.at(im, c) = cplx(re, -ii) * np;
      }
    }
  }
  return spec;
}

GridField random_band_limited(const BoxGrid& grid, int dim, int band, std::uint64_t seed) {
  return from_spectrum(random_band_limited_spectrum(grid, dim, band, seed), true);
}

}  // namespace korn
