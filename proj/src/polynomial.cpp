#include "korn/polynomial.hpp"

#include <algorithm>

#include "korn/error.hpp"
#include "korn/linalg.hpp"

namespace korn {

Polynomial::Polynomial(int n, int dim, Eigen::VectorXd center)
    : n_(n), dim_(dim), center_(std::move(center)) {
  if (center_.size() != n) throw DimensionError("polynomial: center has wrong dimension");
}

void Polynomial::add_term(const MultiIndex& beta, const Eigen::VectorXd& c) {
  if (static_cast<int>(beta.size()) != n_ || c.size() != dim_)
    throw DimensionError("polynomial: term shape mismatch");
  auto it = terms_.find(beta);
  if (it == terms_.end())
    terms_.emplace(beta, c);
  else
    it->second += c;
}

Eigen::VectorXd Polynomial::operator()(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y = x - center_;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(dim_);
  for (auto& [b, c] : terms_) out += monomial(b, y) * c;
  return out;
}

Polynomial Polynomial::derivative(const MultiIndex& alpha) const {
  Polynomial out(n_, dim_, center_);
  for (auto& [b, c] : terms_) {
    MultiIndex r(n_);
    double f = 1.0;
    bool zero = false;
    for (int j = 0; j < n_ && !zero; ++j) {
      if (alpha[j] > b[j]) {
        zero = true;
        break;
      }
      r[j] = b[j] - alpha[j];
      for (int t = 0; t < alpha[j]; ++t) f *= b[j] - t;
    }
    if (!zero) out.add_term(r, f * c);
  }
  return out;
}

Polynomial Polynomial::apply(const OperatorSpec& a) const {
  if (a.n() != n_ || a.dim_v() != dim_) throw DimensionError("polynomial apply: shape mismatch");
  Polynomial out(n_, a.dim_w(), center_);
  for (auto& [al, m] : a.coeffs()) {
    Polynomial d = derivative(al);
    for (auto& [b, c] : d.terms()) out.add_term(b, m * c);
  }
  return out;
}

namespace {

// pw[d][e * size + j] = (j h - center_d)^e for e = 0..max degree.
std::vector<std::vector<double>> axis_powers(const BoxGrid& g, const Eigen::VectorXd& center, int max_deg) {
  const int size = g.size();
  std::vector<std::vector<double>> pw(g.n(), std::vector<double>(static_cast<std::size_t>(max_deg + 1) * size));
  for (int d = 0; d < g.n(); ++d)
    for (int j = 0; j < size; ++j) {
      double y = j * g.spacing() - center(d), v = 1.0;
      for (int e = 0; e <= max_deg; ++e) {
        pw[d][static_cast<std::size_t>(e) * size + j] = v;
        v *= y;
      }
    }
  return pw;
}

}  // namespace

void Polynomial::add_to(GridField& f, double sign) const {
  if (terms_.empty()) return;
  const BoxGrid& g = f.grid();
  std::vector<std::size_t> all(g.num_points());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  add_at(f, all, sign);
}

Eigen::MatrixXd Polynomial::values_at(const BoxGrid& g, const std::vector<std::size_t>& cells) const {
  if (g.n() != n_) throw DimensionError("polynomial values_at: dimension mismatch");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim_, static_cast<Eigen::Index>(cells.size()));
  if (terms_.empty()) return out;
  int max_deg = 0;
  for (auto& [b, c] : terms_) max_deg = std::max(max_deg, degree(b));
  const auto pw = axis_powers(g, center_, max_deg);
  const int size = g.size();
  std::vector<const double*> rows;
  for (auto& [b, c] : terms_)
    for (int d = 0; d < n_; ++d) rows.push_back(pw[d].data() + static_cast<std::size_t>(b[d]) * size);
  std::vector<int> j(n_);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    g.unravel(cells[i], j.data());
    std::size_t t = 0;
    for (auto& [b, c] : terms_) {
      double m = 1.0;
      for (int d = 0; d < n_; ++d) m *= rows[t * n_ + d][j[d]];
      out.col(static_cast<Eigen::Index>(i)) += m * c;
      ++t;
    }
  }
  return out;
}

void Polynomial::add_at(GridField& f, const std::vector<std::size_t>& cells, double sign) const {
  if (terms_.empty()) return;
  if (f.dim() != dim_ || f.grid().n() != n_) throw DimensionError("polynomial add_to: shape mismatch");
  Eigen::MatrixXd v = values_at(f.grid(), cells);
  for (std::size_t i = 0; i < cells.size(); ++i)
    for (int k = 0; k < dim_; ++k) f.at(cells[i], k) += sign * v(k, static_cast<Eigen::Index>(i));
}

PolynomialSolve particular_polynomial_ls(const OperatorSpec& a, const Eigen::VectorXd& c,
                                         const Eigen::VectorXd& center) {
  if (c.size() != a.dim_w()) throw DimensionError("particular_polynomial: c has wrong dimension");
  auto idx = multi_indices(a.n(), a.order());
  const int dv = a.dim_v();
  Eigen::MatrixXd sys = Eigen::MatrixXd::Zero(a.dim_w(), dv * static_cast<int>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) {
    auto it = a.coeffs().find(idx[i]);
    if (it != a.coeffs().end()) sys.middleCols(dv * static_cast<int>(i), dv) = factorial(idx[i]) * it->second;
  }
  Eigen::VectorXd sol = pinv(sys) * c;
  PolynomialSolve out;
  out.q = Polynomial(a.n(), dv, center);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    Eigen::VectorXd qa = sol.segment(dv * static_cast<int>(i), dv);
    if (!qa.isZero(0.0)) out.q.add_term(idx[i], qa);
  }
  double cn = c.norm();
  out.residual = (sys * sol - c).norm() / (cn > 0 ? cn : 1.0);
  return out;
}

Polynomial particular_polynomial(const OperatorSpec& a, const Eigen::VectorXd& c,
                                 const Eigen::VectorXd& center, double tol) {
  PolynomialSolve s = particular_polynomial_ls(a, c, center);
  if (s.residual > tol)
    throw PreconditionError("particular_polynomial: A q = c is inconsistent (relative residual " +
                            std::to_string(s.residual) + ")");
  return s.q;
}

}  // namespace korn
