#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "korn/discretization.hpp"
#include "korn/grid.hpp"
#include "korn/linalg.hpp"
#include "korn/symbol.hpp"

namespace korn {

/// Per-frequency multiplier value(m) = phase * R(m) with R(m) a real rows x cols matrix.
/// Every multiplier here has this form because the discrete symbol is i^k A(kappa(m)).
class MultiplierTable {
 public:
  MultiplierTable() = default;
  MultiplierTable(const BoxGrid& grid, int rows, int cols, cplx phase);

  const BoxGrid& grid() const { return grid_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  cplx phase() const { return phase_; }

  Eigen::Map<Eigen::MatrixXd> real_block(std::size_t idx) {
    return {data_.data() + idx * block_, rows_, cols_};
  }
  Eigen::Map<const Eigen::MatrixXd> real_block(std::size_t idx) const {
    return {data_.data() + idx * block_, rows_, cols_};
  }
  Eigen::MatrixXcd value(std::size_t idx) const { return phase_ * real_block(idx).cast<cplx>(); }

  std::vector<std::string> warnings;

 private:
  BoxGrid grid_;
  int rows_ = 0;
  int cols_ = 0;
  std::size_t block_ = 0;
  cplx phase_{1.0, 0.0};
  std::vector<double> data_;
};

/// kappa(m) for every lattice point, from the per-axis tables.
class Wavenumbers {
 public:
  Wavenumbers(const BoxGrid& grid, const Discretization& d);
  Eigen::VectorXd at(std::size_t idx) const;
  const std::vector<double>& axis() const { return axis_; }

 private:
  BoxGrid grid_;
  std::vector<double> axis_;
};

/// i^k phase for a homogeneous operator of order k.
cplx order_phase(int k);

/// Discrete symbol i^k A(kappa(m)).
MultiplierTable operator_multiplier(const OperatorSpec& a, const BoxGrid& grid, const Discretization& d);

/// pinv of the discrete symbol, zero at m = 0 and wherever kappa(m) = 0. Throws
/// PreconditionError naming the offending m if the rank at a frequency with kappa != 0
/// differs from the generic rank.
MultiplierTable build_pinv_multiplier(const OperatorSpec& a, const BoxGrid& grid, const Discretization& d,
                                      double rank_tol = kRankTol);

/// out(m) = value(m) f(m) on spectra.
GridField apply_multiplier_spectrum(const GridField& spectrum, const MultiplierTable& t);
/// Physical in, physical out.
GridField apply_multiplier(const GridField& f, const MultiplierTable& t, bool real_out);

struct MultiplierBounds {
  double projector_sup = 0.0;  ///< sup_m |A_h(m) P(m)| (spectral norm)
  double mihlin_sup = 0.0;     ///< sup_m |kappa(m)|^k |P(m)|
};
MultiplierBounds multiplier_bounds(const OperatorSpec& a, const MultiplierTable& pinv_table,
                                   const Discretization& d);

/// Largest |value(-m) - conj(value(m))| relative to the largest entry; 0 means real
/// fields map to real fields.
double conjugate_asymmetry(const MultiplierTable& t);

/// Lattice indices m != 0 whose every component is 0 or size/2.
std::vector<std::size_t> nyquist_corners(const BoxGrid& grid);

}  // namespace korn
