#include "korn/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <span>

#include "korn/error.hpp"

namespace korn {
namespace {

double point_norm(const GridField& u, std::size_t i) {
  double s = 0.0;
  for (int c = 0; c < u.dim(); ++c) s += std::norm(u.at(i, c));
  return std::sqrt(s);
}

double point_norm_sq(const GridField& u, std::size_t i) {
  double s = 0.0;
  for (int c = 0; c < u.dim(); ++c) s += std::norm(u.at(i, c));
  return s;
}

void check_grids(const GridField& u, const DomainMask& mask, const char* what) {
  if (!(u.grid() == mask.grid())) throw DimensionError(std::string(what) + ": field and mask grids differ");
}

// Rectangular block of the grid around a cell set, large enough that stencils of total
// radius `margin` evaluated at the cells only read inside it. Axes that would cover the
// whole period wrap instead.
class Window {
 public:
  Window(const BoxGrid& g, const std::vector<std::size_t>& cells, int margin) : g_(g) {
    const int n = g.n(), size = g.size();
    std::vector<int> lo(n, size), hi(n, -1), j(n);
    for (std::size_t i : cells) {
      g.unravel(i, j.data());
      for (int d = 0; d < n; ++d) {
        lo[d] = std::min(lo[d], j[d]);
        hi[d] = std::max(hi[d], j[d]);
      }
    }
    lo_.resize(n);
    len_.resize(n);
    wrap_.resize(n);
    stride_.resize(n);
    for (int d = 0; d < n; ++d) {
      int len = hi[d] - lo[d] + 1 + 2 * margin;
      wrap_[d] = len >= size;
      lo_[d] = wrap_[d] ? 0 : lo[d] - margin;
      len_[d] = wrap_[d] ? size : len;
    }
    total_ = 1;
    for (int d = n - 1; d >= 0; --d) {
      stride_[d] = total_;
      total_ *= static_cast<std::size_t>(len_[d]);
    }
    local_.reserve(cells.size());
    for (std::size_t i : cells) {
      g.unravel(i, j.data());
      std::size_t l = 0;
      for (int d = 0; d < n; ++d) l += static_cast<std::size_t>(((j[d] - lo_[d]) % size + size) % size) * stride_[d];
      local_.push_back(l);
    }
  }

  std::size_t total() const { return total_; }
  const std::vector<std::size_t>& local() const { return local_; }

  std::vector<cplx> gather(std::span<const cplx> comp) const {
    const int n = g_.n(), size = g_.size();
    std::vector<cplx> out(total_);
    std::vector<int> j(n);
    for (std::size_t l = 0; l < total_; ++l) {
      std::size_t r = l;
      for (int d = n - 1; d >= 0; --d) {
        j[d] = ((lo_[d] + static_cast<int>(r % len_[d])) % size + size) % size;
        r /= len_[d];
      }
      out[l] = comp[g_.ravel(j.data())];
    }
    return out;
  }

  // out = 1-D stencil `st` (centred) along axis d; zero beyond non-wrapping edges.
  void apply(const std::vector<cplx>& in, std::vector<cplx>& out, const std::vector<double>& st, int d) const {
    const int r = static_cast<int>(st.size() / 2), len = len_[d];
    const std::size_t stride = stride_[d];
    out.assign(total_, cplx(0.0, 0.0));
    for (std::size_t l = 0; l < total_; ++l) {
      int j = static_cast<int>((l / stride) % len);
      std::size_t base = l - static_cast<std::size_t>(j) * stride;
      cplx acc = 0.0;
      for (int o = -r; o <= r; ++o) {
        double w = st[o + r];
        if (w == 0.0) continue;
        int jj = j + o;
        if (wrap_[d])
          jj = (jj + len) % len;
        else if (jj < 0 || jj >= len)
          continue;
        acc += w * in[base + static_cast<std::size_t>(jj) * stride];
      }
      out[l] = acc;
    }
  }

 private:
  BoxGrid g_;
  std::vector<int> lo_, len_;
  std::vector<bool> wrap_;
  std::vector<std::size_t> stride_;
  std::size_t total_ = 0;
  std::vector<std::size_t> local_;
};

// D^alpha of one component for every alpha in `wanted`, sampled at the window's cells.
// D^alpha is the alpha-fold product of the central first-derivative stencil, built as a
// tree so each alpha costs one 1-D pass.
std::map<MultiIndex, std::vector<cplx>> window_derivatives(const Window& win, std::span<const cplx> comp,
                                                           const std::vector<MultiIndex>& wanted, int order,
                                                           double h) {
  std::vector<double> st = central_first_derivative(order);
  for (double& w : st) w /= h;
  auto parent_axis = [](const MultiIndex& a) {
    for (int d = static_cast<int>(a.size()) - 1; d >= 0; --d)
      if (a[d] > 0) return d;
    return -1;
  };
  std::set<MultiIndex> need;
  for (MultiIndex a : wanted) {
    while (true) {
      if (!need.insert(a).second) break;
      int d = parent_axis(a);
      if (d < 0) break;
      --a[d];
    }
  }
  std::vector<MultiIndex> order_list(need.begin(), need.end());
  std::stable_sort(order_list.begin(), order_list.end(),
                   [](const MultiIndex& x, const MultiIndex& y) { return degree(x) < degree(y); });
  std::map<MultiIndex, std::vector<cplx>> full;
  std::map<MultiIndex, std::vector<cplx>> out;
  for (const MultiIndex& a : order_list) {
    int d = parent_axis(a);
    std::vector<cplx> v;
    if (d < 0) {
      v = win.gather(comp);
    } else {
      MultiIndex p = a;
      --p[d];
      win.apply(full.at(p), v, st, d);
    }
    full.emplace(a, std::move(v));
  }
  for (const MultiIndex& a : wanted) {
    const auto& v = full.at(a);
    std::vector<cplx> at(win.local().size());
    for (std::size_t i = 0; i < at.size(); ++i) at[i] = v[win.local()[i]];
    out.emplace(a, std::move(at));
  }
  return out;
}

// |D^alpha u|^2 summed over components at each of `cells`, for every |alpha| <= k.
// Central schemes use local stencils; spectral ones go through the box transform.
std::vector<std::vector<double>> derivative_energy(const BoxField& u, const std::vector<std::size_t>& cells,
                                                   const std::vector<MultiIndex>& alphas, const Discretization& d) {
  const BoxGrid& g = u.grid();
  std::vector<std::vector<double>> e(alphas.size(), std::vector<double>(cells.size(), 0.0));
  if (d.scheme == Scheme::central) {
    int k = 0;
    for (auto& a : alphas) k = std::max(k, degree(a));
    Window win(g, cells, interior_radius(k, d.stencil_order));
    std::vector<Eigen::MatrixXd> pre(alphas.size()), pim(alphas.size());
    for (std::size_t ai = 0; ai < alphas.size(); ++ai) {
      if (!u.poly.empty()) pre[ai] = u.poly.derivative(alphas[ai]).values_at(g, cells);
      if (!u.poly_imag.empty()) pim[ai] = u.poly_imag.derivative(alphas[ai]).values_at(g, cells);
    }
    for (int c = 0; c < u.dim(); ++c) {
      auto der = window_derivatives(win, u.periodic.component(c), alphas, d.stencil_order, g.spacing());
      for (std::size_t ai = 0; ai < alphas.size(); ++ai) {
        const auto& v = der.at(alphas[ai]);
        for (std::size_t i = 0; i < cells.size(); ++i) {
          cplx z = v[i];
          const auto col = static_cast<Eigen::Index>(i);
          if (pre[ai].size()) z += pre[ai](c, col);
          if (pim[ai].size()) z += cplx(0.0, pim[ai](c, col));
          e[ai][i] += std::norm(z);
        }
      }
    }
    return e;
  }
  Differentiator diff(u, d);
  for (std::size_t ai = 0; ai < alphas.size(); ++ai) {
    GridField da = diff.derivative(alphas[ai]);
    for (std::size_t i = 0; i < cells.size(); ++i) e[ai][i] = point_norm_sq(da, cells[i]);
  }
  return e;
}

}  // namespace

NormReport lp_norm(const GridField& u, const DomainMask& mask, double p) {
  check_grids(u, mask, "lp_norm");
  if (!(p >= 1.0)) throw DimensionError("lp_norm: p must be >= 1");
  NormReport r;
  r.name = "L" + std::to_string(p);
  r.p = p;
  r.cells = mask.count();
  if (std::isinf(p)) {
    for (std::size_t i : mask.indices()) r.value = std::max(r.value, point_norm(u, i));
    return r;
  }
  double s = 0.0;
  for (std::size_t i : mask.indices()) s += std::pow(point_norm(u, i), p);
  r.value = std::pow(s * mask.grid().cell_volume(), 1.0 / p);
  return r;
}

std::vector<std::vector<double>> sobolev_ladder(const BoxField& u, const DomainMask& mask, int k,
                                                const std::vector<double>& ps, const Discretization& d) {
  check_grids(u.periodic, mask, "sobolev_norm");
  if (k < 0) throw DimensionError("sobolev_norm: k must be >= 0");
  for (double p : ps)
    if (!(p >= 1.0) || std::isinf(p)) throw DimensionError("sobolev_norm: p must be finite and >= 1");
  const auto alphas = multi_indices_upto(u.grid().n(), k);
  const auto energy = derivative_energy(u, mask.indices(), alphas, d);
  // acc[j][q]: sum over |alpha| = j of |D^alpha u|^p_p
  std::vector<std::vector<double>> acc(k + 1, std::vector<double>(ps.size(), 0.0));
  const double vol = mask.grid().cell_volume();
  for (std::size_t ai = 0; ai < alphas.size(); ++ai) {
    int j = degree(alphas[ai]);
    for (std::size_t q = 0; q < ps.size(); ++q) {
      double s = 0.0;
      const double half = 0.5 * ps[q];
      for (double e2 : energy[ai]) s += ps[q] == 2.0 ? e2 : std::pow(e2, half);
      acc[j][q] += s * vol;
    }
  }
  for (int j = 1; j <= k; ++j)
    for (std::size_t q = 0; q < ps.size(); ++q) acc[j][q] += acc[j - 1][q];
  for (auto& row : acc)
    for (std::size_t q = 0; q < ps.size(); ++q) row[q] = std::pow(row[q], 1.0 / ps[q]);
  return acc;
}

std::vector<NormReport> sobolev_norms(const BoxField& u, const DomainMask& mask, int k, const std::vector<double>& ps,
                                      const Discretization& d) {
  auto table = sobolev_ladder(u, mask, k, ps, d);
  std::vector<NormReport> out;
  for (std::size_t q = 0; q < ps.size(); ++q) {
    NormReport r;
    r.name = "W" + std::to_string(k) + "," + std::to_string(ps[q]);
    r.p = ps[q];
    r.order = k;
    r.cells = mask.count();
    r.value = table[k][q];
    out.push_back(r);
  }
  return out;
}

NormReport sobolev_norm(const BoxField& u, const DomainMask& mask, int k, double p, const Discretization& d) {
  return sobolev_norms(u, mask, k, {p}, d).front();
}

GridField fd_apply(const OperatorSpec& a, const GridField& u, const std::vector<std::size_t>& cells, int order) {
  if (u.dim() != a.dim_v()) throw DimensionError("fd_apply: field has wrong component count");
  if (u.grid().n() != a.n()) throw DimensionError("fd_apply: dimension mismatch");
  const BoxGrid& g = u.grid();
  GridField out(g, a.dim_w(), u.is_real());
  if (cells.empty() || a.is_zero()) return out;
  std::vector<MultiIndex> alphas;
  for (auto& [al, m] : a.coeffs()) alphas.push_back(al);
  Window win(g, cells, interior_radius(a.order(), order));
  for (int c = 0; c < a.dim_v(); ++c) {
    auto der = window_derivatives(win, u.component(c), alphas, order, g.spacing());
    for (auto& [al, m] : a.coeffs()) {
      const auto& v = der.at(al);
      for (int r = 0; r < a.dim_w(); ++r) {
        double coef = m(r, c);
        if (coef == 0.0) continue;
        for (std::size_t i = 0; i < cells.size(); ++i) out.at(cells[i], r) += coef * v[i];
      }
    }
  }
  return out;
}

NormReport interior_residual(const OperatorSpec& a, const GridField& u, const DomainMask& mask, int order,
                             int min_radius) {
  check_grids(u, mask, "interior_residual");
  const int radius = std::max(interior_radius(a.order(), order), min_radius);
  const auto& cells = mask.interior(radius);
  if (cells.empty())
    throw PreconditionError("interior_residual: no interior cells at margin " + std::to_string(radius) +
                            " (grid too coarse for the mask)");
  GridField au = fd_apply(a, u, cells, order);
  NormReport r;
  r.name = "interior_residual";
  r.p = 2.0;
  r.order = a.order();
  r.cells = cells.size();
  double s = 0.0;
  for (std::size_t i : cells) {
    double v = point_norm(au, i);
    s += v * v;
  }
  r.value = std::sqrt(s * mask.grid().cell_volume());
  return r;
}

NormReport neg_sobolev_norm_2(const GridField& f, double r) {
  if (r < 0) throw DimensionError("neg_sobolev_norm_2: r must be >= 0");
  const BoxGrid& g = f.grid();
  GridField s = to_spectrum(f);
  const int n = g.n(), size = g.size();
  const double np = static_cast<double>(g.num_points());
  const double scale = std::pow(g.length(), n) / (np * np);
  const double two_pi_l = 2.0 * std::numbers::pi / g.length();
  std::vector<int> j(n);
  double acc = 0.0, dc = 0.0;
  for (std::size_t i = 0; i < g.num_points(); ++i) {
    double e = 0.0;
    for (int c = 0; c < f.dim(); ++c) e += std::norm(s.at(i, c));
    if (i == 0) {
      dc = std::sqrt(e) / np;
      if (r == 0.0) acc += e;
      continue;
    }
    g.unravel(i, j.data());
    double m2 = 0.0;
    for (int d = 0; d < n; ++d) {
      double m = g.frequency(j[d]) * two_pi_l;
      m2 += m * m;
    }
    acc += e * std::pow(m2, -r);
  }
  (void)size;
  NormReport rep;
  rep.name = "H-" + std::to_string(r);
  rep.p = 2.0;
  rep.order = -static_cast<int>(std::lround(r));
  rep.value = std::sqrt(acc * scale);
  rep.dc = dc;
  rep.cells = g.num_points();
  return rep;
}

}  // namespace korn
