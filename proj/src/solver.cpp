#include "korn/solver.hpp"

#include <cmath>

#include "korn/error.hpp"

namespace korn {

BoxField::BoxField(GridField p) : periodic(std::move(p)) {}

GridField BoxField::sample() const {
  GridField out = periodic;
  poly.add_to(out);
  if (!poly_imag.empty()) {
    GridField im(periodic.grid(), periodic.dim(), true);
    poly_imag.add_to(im);
    for (std::size_t i = 0; i < out.data().size(); ++i) out.data()[i] += cplx(0.0, im.data()[i].real());
    out.set_real(false);
  }
  return out;
}

namespace {

// Adds an exactly evaluated polynomial pair into f.
void add_polys(GridField& f, const Polynomial& re, const Polynomial& im) {
  if (!re.empty()) re.add_to(f);
  if (!im.empty()) {
    GridField t(f.grid(), f.dim(), true);
    im.add_to(t);
    for (std::size_t i = 0; i < f.data().size(); ++i) f.data()[i] += cplx(0.0, t.data()[i].real());
    f.set_real(false);
  }
}

}  // namespace

Differentiator::Differentiator(const BoxField& f, const Discretization& d)
    : poly_(f.poly), poly_imag_(f.poly_imag), real_(f.periodic.is_real() && f.poly_imag.empty()),
      spectrum_(to_spectrum(f.periodic)), axis_(axis_wavenumbers(f.grid(), d)) {}

GridField Differentiator::derivative(const MultiIndex& alpha) const {
  const BoxGrid& g = spectrum_.grid();
  if (static_cast<int>(alpha.size()) != g.n()) throw DimensionError("derivative: multi-index length");
  const int n = g.n(), size = g.size();
  const int k = degree(alpha);
  GridField s(g, spectrum_.dim(), false);
  const cplx ph = order_phase(k);
  for (std::size_t i = 0; i < g.num_points(); ++i) {
    double m = 1.0;
    std::size_t r = i;
    for (int d = n - 1; d >= 0; --d) {
      double kv = axis_[r % size];
      r /= size;
      for (int e = 0; e < alpha[d]; ++e) m *= kv;
    }
    for (int c = 0; c < spectrum_.dim(); ++c) s.at(i, c) = ph * m * spectrum_.at(i, c);
  }
  GridField out = from_spectrum(s, real_);
  Polynomial dre = poly_.empty() ? poly_ : poly_.derivative(alpha);
  Polynomial dim = poly_imag_.empty() ? poly_imag_ : poly_imag_.derivative(alpha);
  add_polys(out, dre, dim);
  return out;
}

GridField apply_operator(const OperatorSpec& a, const GridField& v, const Discretization& d) {
  if (v.dim() != a.dim_v()) throw DimensionError("apply_operator: field has " + std::to_string(v.dim()) +
                                                 " components, operator expects " + std::to_string(a.dim_v()));
  return apply_multiplier(v, operator_multiplier(a, v.grid(), d), v.is_real());
}

GridField apply_operator(const OperatorSpec& a, const BoxField& v, const Discretization& d) {
  GridField out = apply_operator(a, v.periodic, d);
  Polynomial re = v.poly.empty() ? v.poly : v.poly.apply(a);
  Polynomial im = v.poly_imag.empty() ? v.poly_imag : v.poly_imag.apply(a);
  add_polys(out, re, im);
  return out;
}

GridField apply_operator(const OperatorSpec& a, const MultiplierTable& table, const BoxField& v) {
  if (v.dim() != a.dim_v() || table.cols() != a.dim_v() || table.rows() != a.dim_w())
    throw DimensionError("apply_operator: table does not match the operator");
  GridField out = apply_multiplier(v.periodic, table, v.periodic.is_real());
  Polynomial re = v.poly.empty() ? v.poly : v.poly.apply(a);
  Polynomial im = v.poly_imag.empty() ? v.poly_imag : v.poly_imag.apply(a);
  add_polys(out, re, im);
  return out;
}

GridField extend_rhs(const GridField& f, const DomainMask& mask, bool compensate) {
  const BoxGrid& g = f.grid();
  if (!(g == mask.grid())) throw DimensionError("solve: field and mask grids differ");
  GridField e(g, f.dim(), f.is_real());
  for (std::size_t i : mask.indices())
    for (int c = 0; c < f.dim(); ++c) e.at(i, c) = f.at(i, c);
  if (!compensate) return e;

  // Parity patterns s(x) = prod_d (-1)^{e_d j_d} are the kappa = 0 modes. Subtracting
  // a_s s(x) on the padding B removes their content; the patterns stay orthogonal on B
  // because the unpadded block has even side length.
  const int n = g.n();
  const std::size_t np = g.num_points();
  std::vector<std::size_t> pad_cells;
  std::vector<int> parity(np);
  std::vector<int> j(n);
  for (std::size_t i = 0; i < np; ++i) {
    if (!g.in_unpadded(i)) pad_cells.push_back(i);
    g.unravel(i, j.data());
    int bits = 0;
    for (int d = 0; d < n; ++d) bits |= (j[d] & 1) << d;
    parity[i] = bits;
  }
  const double nb = static_cast<double>(pad_cells.size());
  auto sign = [&](std::size_t i, int pattern) { return (__builtin_popcount(parity[i] & pattern) & 1) ? -1.0 : 1.0; };
  for (int pattern = 1; pattern < (1 << n); ++pattern)
    for (int c = 0; c < f.dim(); ++c) {
      cplx acc = 0.0;
      for (std::size_t i : mask.indices()) acc += sign(i, pattern) * e.at(i, c);
      if (acc == 0.0) continue;
      cplx a = acc / nb;
      for (std::size_t i : pad_cells) e.at(i, c) -= a * sign(i, pattern);
    }
  return e;
}

SpectralSolver::SpectralSolver(const OperatorSpec& a, const BoxGrid& grid, const SolveOptions& opt)
    : a_(a), grid_(grid), opt_(opt) {
  if (a.n() != grid.n()) throw DimensionError("solver: operator dimension n=" + std::to_string(a.n()) +
                                              " does not match grid dimension " + std::to_string(grid.n()));
  if (a.is_zero()) throw PreconditionError("solver: zero operator");
  if (opt.require_maximal_rank) {
    Classification c = classify(a);
    if (!c.is_maximal_rank)
      throw PreconditionError("solver: operator " + (a.name().empty() ? std::string("(unnamed)") : a.name()) +
                              " is not maximal rank (image of the symbol varies over the sphere)");
    if (c.essential_range_dim < a.dim_w())
      warnings_.push_back("symbol image is a proper subspace of W; components outside it are not solvable");
  }
  pinv_ = std::make_shared<MultiplierTable>(build_pinv_multiplier(a, grid, opt.disc, opt.rank_tol));
  op_ = std::make_shared<MultiplierTable>(operator_multiplier(a, grid, opt.disc));
  if (conjugate_asymmetry(*pinv_) > 1e-12)
    warnings_.push_back("inverse multiplier is not conjugate symmetric; real data gives complex solutions");
}

SolveResult SpectralSolver::solve(const GridField& f, const DomainMask& mask, bool with_residual) const {
  if (!(f.grid() == grid_)) throw DimensionError("solve: field grid does not match solver grid");
  if (!(mask.grid() == grid_)) throw DimensionError("solve: mask grid does not match solver grid");
  if (f.dim() != a_.dim_w())
    throw DimensionError("solve: data has " + std::to_string(f.dim()) + " components, operator maps into R^" +
                         std::to_string(a_.dim_w()));
  for (std::size_t i : mask.indices())
    for (int c = 0; c < f.dim(); ++c)
      if (!std::isfinite(f.at(i, c).real()) || !std::isfinite(f.at(i, c).imag()))
        throw Error("solve: data contains non-finite values on the mask");

  SolveResult res;
  res.warnings = warnings_;
  res.extended_rhs = extend_rhs(f, mask, opt_.compensate_corners);
  GridField spec = to_spectrum(res.extended_rhs);
  const double np = static_cast<double>(grid_.num_points());

  Eigen::VectorXd mre(f.dim()), mim(f.dim());
  for (int c = 0; c < f.dim(); ++c) {
    mre(c) = spec.at(0, c).real() / np;
    mim(c) = spec.at(0, c).imag() / np;
  }
  res.mean = mre;
  PolynomialSolve pre = particular_polynomial_ls(a_, mre, mask.centroid());
  res.polynomial_residual = pre.residual;
  BoxField v;
  v.poly = pre.q;
  if (!f.is_real() && mim.norm() > 0.0) {
    PolynomialSolve pim = particular_polynomial_ls(a_, mim, mask.centroid());
    v.poly_imag = pim.q;
    res.polynomial_residual = std::max(res.polynomial_residual, pim.residual);
  }
  if (res.polynomial_residual > 1e-10)
    res.warnings.push_back("mean of the data is outside the reachable subspace; A q = mean is inconsistent");

  GridField vs = apply_multiplier_spectrum(spec, *pinv_);
  v.periodic = from_spectrum(vs, f.is_real());
  res.v = std::move(v);

  if (with_residual) {
    GridField av = from_spectrum(apply_multiplier_spectrum(vs, *op_), f.is_real());
    Polynomial aq = res.v.poly.apply(a_);
    Polynomial aqi = res.v.poly_imag.empty() ? res.v.poly_imag : res.v.poly_imag.apply(a_);
    add_polys(av, aq, aqi);
    double num = 0.0, den = 0.0;
    for (std::size_t i : mask.indices())
      for (int c = 0; c < f.dim(); ++c) {
        num += std::norm(av.at(i, c) - f.at(i, c));
        den += std::norm(f.at(i, c));
      }
    res.rhs_norm = std::sqrt(den * grid_.cell_volume());
    res.residual = den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
  }
  return res;
}

SolveResult solve(const OperatorSpec& a, const GridField& f, const DomainMask& mask, const SolveOptions& opt) {
  return SpectralSolver(a, f.grid(), opt).solve(f, mask);
}

}  // namespace korn
