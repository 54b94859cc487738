#pragma once

#include <string>
#include <vector>

#include "korn/discretization.hpp"
#include "korn/domain.hpp"
#include "korn/solver.hpp"

namespace korn {

struct NormReport {
  std::string name;
  double p = 2.0;
  int order = 0;   ///< derivative order (negative for dual norms)
  double value = 0.0;
  double dc = 0.0; ///< dual norms only: |mean| reported apart from the value
  std::size_t cells = 0;
};

/// (sum_{mask} |u(x)|^p h^n)^{1/p}, |.| Euclidean over components. p = inf gives the max.
NormReport lp_norm(const GridField& u, const DomainMask& mask, double p);

/// (sum_{|alpha| <= k} |D^alpha u|^p_{Lp(mask)})^{1/p}, derivatives from `d`.
NormReport sobolev_norm(const BoxField& u, const DomainMask& mask, int k, double p, const Discretization& d);
/// Several exponents at once (derivatives computed once).
std::vector<NormReport> sobolev_norms(const BoxField& u, const DomainMask& mask, int k,
                                      const std::vector<double>& ps, const Discretization& d);

/// table[j][q] = |u|_{W^{j,ps[q]}(mask)} for j = 0..k, from one pass over the derivatives.
std::vector<std::vector<double>> sobolev_ladder(const BoxField& u, const DomainMask& mask, int k,
                                                const std::vector<double>& ps, const Discretization& d);

/// L2 norm over interior cells of the central finite-difference A u, where D_j^a is the
/// a-fold power of the central first-derivative stencil of `order`. The interior is the
/// set of cells whose cube of radius (order/2) * k lies in the mask. Throws
/// PreconditionError if that set is empty. `min_radius` enlarges the margin (in cells),
/// which keeps the region fixed in physical units when comparing grids.
NormReport interior_residual(const OperatorSpec& a, const GridField& u, const DomainMask& mask, int order,
                             int min_radius = 0);
/// Margin used by interior_residual for an operator of order k.
inline int interior_radius(int k, int stencil_order) { return (stencil_order / 2) * k; }

/// Central finite-difference A u evaluated at the given cells (all others zero).
GridField fd_apply(const OperatorSpec& a, const GridField& u, const std::vector<std::size_t>& cells, int order);

/// Periodic-box dual norm (sum_{m != 0} |2 pi m / L|^{-2r} |f_m|^2)^{1/2} with Parseval
/// scaling; the mean is reported in `dc`. At r = 0 the mean is included and the value is
/// the box L2 norm.
NormReport neg_sobolev_norm_2(const GridField& f, double r);

}  // namespace korn
