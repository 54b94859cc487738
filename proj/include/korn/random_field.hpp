#pragma once

#include <cstdint>

#include "korn/grid.hpp"

namespace korn {

/// Seed of sample `index` in an ensemble; independent of thread scheduling.
std::uint64_t sample_seed(std::uint64_t base, std::uint64_t index);

/// Real field sum_{|m_j| <= band} c_m exp(2 pi i m.x / L) with independent complex Gaussian
/// c_m (Hermitian-symmetrised). The coefficients are drawn in a grid-independent order, so
/// the same seed gives samples of the same function on every grid with size > 2 band.
GridField random_band_limited(const BoxGrid& grid, int dim, int band, std::uint64_t seed);
/// Unnormalised DFT of the same field (to_spectrum of random_band_limited, up to round-off).
GridField random_band_limited_spectrum(const BoxGrid& grid, int dim, int band, std::uint64_t seed);

}  // namespace korn
