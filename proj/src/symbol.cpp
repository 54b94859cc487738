#include "korn/symbol.hpp"

#include <cmath>
#include <numeric>

#include "korn/error.hpp"

namespace korn {

int degree(const MultiIndex& a) { return std::accumulate(a.begin(), a.end(), 0); }

double factorial(const MultiIndex& a) {
  double f = 1.0;
  for (int v : a)
    for (int i = 2; i <= v; ++i) f *= i;
  return f;
}

double monomial(const MultiIndex& a, const Eigen::VectorXd& xi) {
  double p = 1.0;
  for (std::size_t j = 0; j < a.size(); ++j)
    for (int e = 0; e < a[j]; ++e) p *= xi(static_cast<Eigen::Index>(j));
  return p;
}

namespace {

void fill_indices(int n, int k, int pos, MultiIndex& cur, std::vector<MultiIndex>& out) {
  if (pos == n - 1) {
    cur[pos] = k;
    out.push_back(cur);
    return;
  }
  for (int v = k; v >= 0; --v) {
    cur[pos] = v;
    fill_indices(n, k - v, pos + 1, cur, out);
  }
}

// entries below this fraction of the largest coefficient entry are cancellation noise
constexpr double kPruneTol = 1e-14;

OperatorSpec::Coeffs pruned(OperatorSpec::Coeffs c) {
  double big = 0.0;
  for (auto& [a, m] : c) big = std::max(big, m.cwiseAbs().maxCoeff());
  for (auto it = c.begin(); it != c.end();) {
    Eigen::MatrixXd& m = it->second;
    for (Eigen::Index i = 0; i < m.size(); ++i)
      if (std::abs(m(i)) <= kPruneTol * big) m(i) = 0.0;
    if (m.isZero(0.0))
      it = c.erase(it);
    else
      ++it;
  }
  return c;
}

}  // namespace

std::vector<MultiIndex> multi_indices(int n, int k) {
  std::vector<MultiIndex> out;
  if (n <= 0 || k < 0) return out;
  MultiIndex cur(n, 0);
  fill_indices(n, k, 0, cur, out);
  return out;
}

std::vector<MultiIndex> multi_indices_upto(int n, int k) {
  std::vector<MultiIndex> out;
  for (int d = 0; d <= k; ++d) {
    auto part = multi_indices(n, d);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

std::string to_string(const MultiIndex& a) {
  std::string s = "(";
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(a[i]);
  }
  return s + ")";
}

OperatorSpec::OperatorSpec(int n, int dim_v, int dim_w, int order, Coeffs coeffs, std::string name)
    : n_(n), dim_v_(dim_v), dim_w_(dim_w), order_(order), name_(std::move(name)) {
  if (n < 1) throw DimensionError("operator: spatial dimension must be >= 1");
  if (dim_v < 1 || dim_w < 1) throw DimensionError("operator: dim_v and dim_w must be >= 1");
  if (order < 1) throw DimensionError("operator: order must be >= 1");
  for (auto& [a, m] : coeffs) {
    if (static_cast<int>(a.size()) != n)
      throw DimensionError("operator: multi-index " + to_string(a) + " has wrong length");
    for (int v : a)
      if (v < 0) throw DimensionError("operator: negative exponent in " + to_string(a));
    if (degree(a) != order)
      throw DimensionError("operator: multi-index " + to_string(a) + " is not of order " +
                           std::to_string(order) + " (operator must be homogeneous)");
    if (m.rows() != dim_w || m.cols() != dim_v)
      throw DimensionError("operator: coefficient " + to_string(a) + " has shape " +
                           std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                           ", expected " + std::to_string(dim_w) + "x" + std::to_string(dim_v));
  }
  coeffs_ = pruned(std::move(coeffs));
}

double OperatorSpec::scale() const {
  double s = 0.0;
  for (auto& [a, m] : coeffs_) s += m.norm();
  return s;
}

Eigen::MatrixXd OperatorSpec::eval(const Eigen::VectorXd& xi) const {
  if (xi.size() != n_) throw DimensionError("eval: xi has wrong dimension");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim_w_, dim_v_);
  for (auto& [a, m] : coeffs_) out += monomial(a, xi) * m;
  return out;
}

OperatorSpec adjoint(const OperatorSpec& a) {
  OperatorSpec::Coeffs c;
  double sign = (a.order() % 2 == 0) ? 1.0 : -1.0;
  for (auto& [al, m] : a.coeffs()) c[al] = sign * m.transpose();
  return OperatorSpec(a.n(), a.dim_w(), a.dim_v(), a.order(), std::move(c),
                      a.name().empty() ? "" : "adjoint_of:" + a.name());
}

OperatorSpec symbol_transpose(const OperatorSpec& a) {
  OperatorSpec::Coeffs c;
  for (auto& [al, m] : a.coeffs()) c[al] = m.transpose();
  return OperatorSpec(a.n(), a.dim_w(), a.dim_v(), a.order(), std::move(c));
}

OperatorSpec compose(const OperatorSpec& b, const OperatorSpec& a) {
  if (b.n() != a.n()) throw DimensionError("compose: spatial dimensions differ");
  if (b.dim_v() != a.dim_w())
    throw DimensionError("compose: inner codomain dim " + std::to_string(a.dim_w()) +
                         " does not match outer domain dim " + std::to_string(b.dim_v()));
  OperatorSpec::Coeffs c;
  for (auto& [be, mb] : b.coeffs())
    for (auto& [al, ma] : a.coeffs()) {
      MultiIndex g(a.n());
      for (int j = 0; j < a.n(); ++j) g[j] = be[j] + al[j];
      auto it = c.find(g);
      if (it == c.end())
        c.emplace(g, mb * ma);
      else
        it->second += mb * ma;
    }
  return OperatorSpec(a.n(), a.dim_v(), b.dim_w(), a.order() + b.order(), std::move(c));
}

OperatorSpec add(const OperatorSpec& a, const OperatorSpec& b) {
  if (a.n() != b.n() || a.dim_v() != b.dim_v() || a.dim_w() != b.dim_w())
    throw DimensionError("add: operator shapes differ");
  if (a.order() != b.order()) throw DimensionError("add: orders differ (sum not homogeneous)");
  OperatorSpec::Coeffs c = a.coeffs();
  for (auto& [al, m] : b.coeffs()) {
    auto it = c.find(al);
    if (it == c.end())
      c.emplace(al, m);
    else
      it->second += m;
  }
  return OperatorSpec(a.n(), a.dim_v(), a.dim_w(), a.order(), std::move(c));
}

OperatorSpec scaled(const OperatorSpec& a, double s) {
  OperatorSpec::Coeffs c;
  for (auto& [al, m] : a.coeffs()) c[al] = s * m;
  return OperatorSpec(a.n(), a.dim_v(), a.dim_w(), a.order(), std::move(c), a.name());
}

OperatorSpec power(const OperatorSpec& a, int p) {
  if (p < 1) throw DimensionError("power: exponent must be >= 1");
  if (a.dim_v() != a.dim_w()) throw DimensionError("power: operator is not square");
  OperatorSpec out = a;
  for (int i = 1; i < p; ++i) out = compose(a, out);
  return out;
}

OperatorSpec generalized_laplacian(const OperatorSpec& a) {
  OperatorSpec out = compose(symbol_transpose(a), a);
  if (!a.name().empty()) out.set_name("generalized_laplacian:" + a.name());
  return out;
}

}  // namespace korn
