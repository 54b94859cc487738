#include "korn/multiplier.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "korn/error.hpp"

namespace korn {

MultiplierTable::MultiplierTable(const BoxGrid& grid, int rows, int cols, cplx phase)
    : grid_(grid), rows_(rows), cols_(cols), block_(static_cast<std::size_t>(rows) * cols), phase_(phase),
      data_(grid.num_points() * block_, 0.0) {}

Wavenumbers::Wavenumbers(const BoxGrid& grid, const Discretization& d)
    : grid_(grid), axis_(axis_wavenumbers(grid, d)) {}

Eigen::VectorXd Wavenumbers::at(std::size_t idx) const {
  const int n = grid_.n(), size = grid_.size();
  Eigen::VectorXd k(n);
  for (int d = n - 1; d >= 0; --d) {
    k(d) = axis_[idx % size];
    idx /= size;
  }
  return k;
}

cplx order_phase(int k) {
  static const cplx p[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return p[((k % 4) + 4) % 4];
}

MultiplierTable operator_multiplier(const OperatorSpec& a, const BoxGrid& grid, const Discretization& d) {
  if (a.n() != grid.n()) throw DimensionError("operator_multiplier: operator and grid dimensions differ");
  MultiplierTable t(grid, a.dim_w(), a.dim_v(), order_phase(a.order()));
  Wavenumbers kw(grid, d);
  for (std::size_t i = 0; i < grid.num_points(); ++i) t.real_block(i) = a.eval(kw.at(i));
  return t;
}

MultiplierTable build_pinv_multiplier(const OperatorSpec& a, const BoxGrid& grid, const Discretization& d,
                                      double rank_tol) {
  if (a.n() != grid.n()) throw DimensionError("build_pinv_multiplier: operator and grid dimensions differ");
  if (a.is_zero()) throw PreconditionError("build_pinv_multiplier: zero operator");
  MultiplierTable t(grid, a.dim_v(), a.dim_w(), std::conj(order_phase(a.order())));
  Wavenumbers kw(grid, d);
  int generic = -1;
  for (std::size_t i = 0; i < grid.num_points(); ++i) {
    Eigen::VectorXd k = kw.at(i);
    if (k.isZero(0.0)) continue;
    Eigen::MatrixXd m = a.eval(k);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& s = svd.singularValues();
    double cut = rank_cutoff(s(0), rank_tol, 0.0);
    int r = 0;
    while (r < s.size() && s(r) > cut) ++r;
    if (generic < 0) generic = r;
    if (r != generic) {
      std::vector<int> j(grid.n());
      grid.unravel(i, j.data());
      std::string ms;
      for (int q = 0; q < grid.n(); ++q) ms += (q ? "," : "") + std::to_string(grid.frequency(j[q]));
      throw PreconditionError("build_pinv_multiplier: symbol rank " + std::to_string(r) + " at m=(" + ms +
                              ") differs from " + std::to_string(generic) + "; operator is not constant rank");
    }
    auto blk = t.real_block(i);
    blk.setZero();
    for (int q = 0; q < r; ++q)
      blk.noalias() += svd.matrixV().col(q) * (svd.matrixU().col(q).transpose() / s(q));
  }
  return t;
}

GridField apply_multiplier_spectrum(const GridField& spec, const MultiplierTable& t) {
  if (spec.dim() != t.cols()) throw DimensionError("apply_multiplier: field has wrong component count");
  if (!(spec.grid() == t.grid())) throw DimensionError("apply_multiplier: grid mismatch");
  const std::size_t np = spec.grid().num_points();
  const int rows = t.rows(), cols = t.cols();
  GridField out(spec.grid(), rows, false);
  const cplx ph = t.phase();
  std::vector<cplx> in(cols);
  for (std::size_t i = 0; i < np; ++i) {
    auto blk = t.real_block(i);
    for (int c = 0; c < cols; ++c) in[c] = spec.at(i, c);
    for (int r = 0; r < rows; ++r) {
      cplx acc = 0.0;
      for (int c = 0; c < cols; ++c) acc += blk(r, c) * in[c];
      out.at(i, r) = ph * acc;
    }
  }
  return out;
}

GridField apply_multiplier(const GridField& f, const MultiplierTable& t, bool real_out) {
  return from_spectrum(apply_multiplier_spectrum(to_spectrum(f), t), real_out);
}

MultiplierBounds multiplier_bounds(const OperatorSpec& a, const MultiplierTable& p, const Discretization& d) {
  MultiplierBounds b;
  const BoxGrid& g = p.grid();
  Wavenumbers kw(g, d);
  for (std::size_t i = 1; i < g.num_points(); ++i) {
    Eigen::VectorXd k = kw.at(i);
    Eigen::MatrixXd pr = p.real_block(i);
    if (pr.isZero(0.0)) continue;
    Eigen::MatrixXd ap = a.eval(k) * pr;
    Eigen::JacobiSVD<Eigen::MatrixXd> s1(ap), s2(pr);
    b.projector_sup = std::max(b.projector_sup, s1.singularValues()(0));
    b.mihlin_sup = std::max(b.mihlin_sup, std::pow(k.norm(), a.order()) * s2.singularValues()(0));
  }
  return b;
}

std::vector<std::size_t> nyquist_corners(const BoxGrid& g) {
  std::vector<std::size_t> out;
  const int n = g.n();
  std::vector<int> j(n);
  for (int mask = 1; mask < (1 << n); ++mask) {
    for (int d = 0; d < n; ++d) j[d] = (mask >> d) & 1 ? g.size() / 2 : 0;
    out.push_back(g.ravel(j.data()));
  }
  return out;
}

double conjugate_asymmetry(const MultiplierTable& t) {
  const auto& mir = mirror_indices(t.grid());
  const cplx ph = t.phase();
  double big = 0.0, diff = 0.0;
  for (std::size_t i = 0; i < t.grid().num_points(); ++i) {
    auto a = t.real_block(i);
    auto b = t.real_block(mir[i]);
    big = std::max(big, a.cwiseAbs().maxCoeff());
    diff = std::max(diff, (ph * b.cast<cplx>() - std::conj(ph) * a.cast<cplx>()).cwiseAbs().maxCoeff());
  }
  return big > 0.0 ? diff / big : 0.0;
}

}  // namespace korn
