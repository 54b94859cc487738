#include "korn/discretization.hpp"

#include <cmath>
#include <numbers>

#include "korn/error.hpp"

namespace korn {

std::string to_string(const Discretization& d) {
  if (d.scheme == Scheme::spectral) return "spectral";
  return "central" + std::to_string(d.stencil_order);
}

Discretization parse_discretization(const std::string& s) {
  if (s == "spectral") return Discretization::spectral();
  if (s.rfind("central", 0) == 0) {
    std::string rest = s.substr(7);
    int q = 4;
    if (!rest.empty()) {
      try {
        q = std::stoi(rest);
      } catch (...) {
        throw ConfigError("bad discretization '" + s + "'");
      }
    }
    if (q < 2 || q > 12 || q % 2) throw ConfigError("central stencil order must be even in [2,12]");
    return Discretization::central(q);
  }
  throw ConfigError("unknown discretization '" + s + "' (spectral | central<q>)");
}

std::vector<double> fd_weights(int deriv, const std::vector<double>& x) {
  // B. Fornberg, "Generation of finite difference formulas on arbitrarily spaced grids"
  const int n = static_cast<int>(x.size()) - 1;
  if (deriv < 0 || deriv > n) throw DimensionError("fd_weights: not enough points");
  std::vector<std::vector<double>> c(n + 1, std::vector<double>(deriv + 1, 0.0));
  double c1 = 1.0, c4 = x[0];
  c[0][0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    int mn = std::min(i, deriv);
    double c2 = 1.0, c5 = c4;
    c4 = x[i];
    for (int j = 0; j < i; ++j) {
      double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n + 1);
  for (int i = 0; i <= n; ++i) w[i] = c[i][deriv];
  return w;
}

std::vector<double> central_first_derivative(int order) {
  if (order < 2 || order % 2) throw DimensionError("central stencil order must be even and >= 2");
  int r = order / 2;
  std::vector<double> x;
  for (int o = -r; o <= r; ++o) x.push_back(o);
  auto w = fd_weights(1, x);
  // exact antisymmetry; Fornberg leaves ~1e-16 on the centre weight
  for (int o = 0; o <= r; ++o) {
    double a = 0.5 * (w[r + o] - w[r - o]);
    w[r + o] = a;
    w[r - o] = -a;
  }
  return w;
}

std::vector<double> axis_wavenumbers(const BoxGrid& grid, const Discretization& d) {
  const int n = grid.size();
  const double h = grid.spacing();
  std::vector<double> k(n, 0.0);
  if (d.scheme == Scheme::spectral) {
    for (int j = 0; j < n; ++j) k[j] = 2.0 * std::numbers::pi * grid.frequency(j) / grid.length();
  } else {
    auto w = central_first_derivative(d.stencil_order);
    int r = d.stencil_order / 2;
    for (int j = 0; j < n; ++j) {
      double th = 2.0 * std::numbers::pi * j / n;
      double s = 0.0;
      for (int o = 1; o <= r; ++o) s += 2.0 * w[r + o] * std::sin(o * th);
      k[j] = s / h;
    }
  }
  k[0] = 0.0;
  k[n / 2] = 0.0;
  return k;
}

}  // namespace korn
