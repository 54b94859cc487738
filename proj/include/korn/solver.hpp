#pragma once

#include <memory>
#include <string>
#include <vector>

#include "korn/classify.hpp"
#include "korn/discretization.hpp"
#include "korn/domain.hpp"
#include "korn/multiplier.hpp"
#include "korn/polynomial.hpp"

namespace korn {

/// Field on the whole box: periodic samples plus a (non-periodic) polynomial. Solutions
/// carry their mean-value correction as the polynomial part.
struct BoxField {
  GridField periodic;
  Polynomial poly;       ///< real part
  Polynomial poly_imag;  ///< imaginary part, empty for real data

  BoxField() = default;
  explicit BoxField(GridField p);

  int dim() const { return periodic.dim(); }
  const BoxGrid& grid() const { return periodic.grid(); }
  /// periodic + polynomial at every grid point
  GridField sample() const;
};

/// D^alpha of a box field for several alpha, sharing one forward transform.
class Differentiator {
 public:
  Differentiator(const BoxField& f, const Discretization& d);
  GridField derivative(const MultiIndex& alpha) const;

 private:
  Polynomial poly_;
  Polynomial poly_imag_;
  bool real_ = true;
  GridField spectrum_;
  std::vector<double> axis_;
};

/// Discrete A applied to a box field: multiplier on the periodic part, exact on the polynomial.
GridField apply_operator(const OperatorSpec& a, const BoxField& v, const Discretization& d);
GridField apply_operator(const OperatorSpec& a, const GridField& v, const Discretization& d);
/// Same with a prebuilt operator_multiplier table of `a`.
GridField apply_operator(const OperatorSpec& a, const MultiplierTable& table, const BoxField& v);

struct SolveOptions {
  Discretization disc = Discretization::spectral();
  double rank_tol = kRankTol;
  /// cancel the content of the extended data at kappa = 0 frequencies using the padding
  bool compensate_corners = true;
  /// skip the maximal-rank precondition (used for internal auxiliary solves)
  bool require_maximal_rank = true;
};

struct SolveResult {
  BoxField v;
  Eigen::VectorXd mean;           ///< DC of the extended data (real part)
  double polynomial_residual = 0.0;
  double residual = 0.0;          ///< |A_h v - f|_{L2(mask)} / |f|_{L2(mask)}
  double rhs_norm = 0.0;          ///< |f|_{L2(mask)}
  GridField extended_rhs;         ///< zero extension plus padding compensation
  std::vector<std::string> warnings;
};

/// Right inverse of a maximal-rank operator on a padded periodic box. The data are
/// zero-extended off the mask; content that the discrete symbol cannot reach
/// (frequencies with kappa = 0) is cancelled by a correction supported in the padding,
/// so A_h v = f holds on the mask at every frequency.
class SpectralSolver {
 public:
  SpectralSolver(const OperatorSpec& a, const BoxGrid& grid, const SolveOptions& opt = {});

  const OperatorSpec& spec() const { return a_; }
  const BoxGrid& grid() const { return grid_; }
  const SolveOptions& options() const { return opt_; }
  const MultiplierTable& pinv_table() const { return *pinv_; }
  const MultiplierTable& operator_table() const { return *op_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  SolveResult solve(const GridField& f, const DomainMask& mask, bool with_residual = true) const;

 private:
  OperatorSpec a_;
  BoxGrid grid_;
  SolveOptions opt_;
  std::shared_ptr<const MultiplierTable> pinv_;
  std::shared_ptr<const MultiplierTable> op_;
  std::vector<std::string> warnings_;
};

/// Zero-extension of `f` off the mask followed by the padding compensation.
GridField extend_rhs(const GridField& f, const DomainMask& mask, bool compensate_corners);

/// One-shot convenience wrapper.
SolveResult solve(const OperatorSpec& a, const GridField& f, const DomainMask& mask, const SolveOptions& opt = {});

}  // namespace korn
