#pragma once

#include <string>
#include <vector>

#include "korn/grid.hpp"

namespace korn {

/// How D_j acts on grid data. Every discrete operator is the continuous symbol
/// evaluated at the per-axis wavenumber kappa(m): D^alpha -> (i kappa)^alpha.
///  - spectral: kappa = 2 pi m / L, with kappa = 0 at the Nyquist index
///  - central:  kappa = modified wavenumber of the central first-derivative stencil of
///              the given (even) order; higher derivatives are powers of that stencil
enum class Scheme { spectral, central };

struct Discretization {
  Scheme scheme = Scheme::spectral;
  int stencil_order = 4;

  static Discretization spectral() { return {Scheme::spectral, 4}; }
  static Discretization central(int order = 4) { return {Scheme::central, order}; }
};

std::string to_string(const Discretization& d);
Discretization parse_discretization(const std::string& s);

/// Fornberg weights for the `deriv`-th derivative at 0 from the points `offsets`.
std::vector<double> fd_weights(int deriv, const std::vector<double>& offsets);

/// Central first-derivative weights w_{-r..r} (unscaled, multiply by 1/h) of even `order`.
std::vector<double> central_first_derivative(int order);
inline int central_half_width(int order) { return order / 2; }

/// kappa for every FFT index 0..size-1 along one axis. Exactly zero at j = 0 and j = size/2.
std::vector<double> axis_wavenumbers(const BoxGrid& grid, const Discretization& d);

}  // namespace korn
