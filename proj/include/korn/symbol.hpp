#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

namespace korn {

/// Exponent vector of a partial derivative D^alpha.
using MultiIndex = std::vector<int>;

int degree(const MultiIndex& a);
/// alpha! = prod alpha_j!
double factorial(const MultiIndex& a);
/// xi^alpha
double monomial(const MultiIndex& a, const Eigen::VectorXd& xi);
/// All multi-indices in n variables with |alpha| = k, lexicographically descending
/// ((k,0,..) first).
std::vector<MultiIndex> multi_indices(int n, int k);
/// All multi-indices with |alpha| <= k, grouped by degree.
std::vector<MultiIndex> multi_indices_upto(int n, int k);
std::string to_string(const MultiIndex& a);

/// Homogeneous constant-coefficient operator A u = sum_{|alpha|=k} A_alpha D^alpha u
/// from V = R^dim_v to W = R^dim_w. Its symbol is A(xi) = sum A_alpha xi^alpha.
///
/// The zero operator is representable (compositions may cancel); classify and
/// the solvers reject it.
class OperatorSpec {
 public:
  using Coeffs = std::map<MultiIndex, Eigen::MatrixXd>;

  OperatorSpec() = default;
  OperatorSpec(int n, int dim_v, int dim_w, int order, Coeffs coeffs, std::string name = {});

  int n() const { return n_; }
  int dim_v() const { return dim_v_; }
  int dim_w() const { return dim_w_; }
  int order() const { return order_; }
  const Coeffs& coeffs() const { return coeffs_; }
  const std::string& name() const { return name_; }
  void set_name(std::string s) { name_ = std::move(s); }

  bool is_zero() const { return coeffs_.empty(); }
  /// Sum of Frobenius norms of the coefficients.
  double scale() const;

  /// A(xi) as a dim_w x dim_v matrix.
  Eigen::MatrixXd eval(const Eigen::VectorXd& xi) const;

 private:
  int n_ = 0;
  int dim_v_ = 0;
  int dim_w_ = 0;
  int order_ = 0;
  Coeffs coeffs_;
  std::string name_;
};

/// Formal adjoint: coefficients (-1)^k A_alpha^T.
OperatorSpec adjoint(const OperatorSpec& a);
/// B o A; coefficient of D^gamma is sum_{beta+alpha=gamma} B_beta A_alpha.
OperatorSpec compose(const OperatorSpec& b, const OperatorSpec& a);
/// Operator whose symbol is A(xi)^T (no sign change).
OperatorSpec symbol_transpose(const OperatorSpec& a);
OperatorSpec add(const OperatorSpec& a, const OperatorSpec& b);
OperatorSpec scaled(const OperatorSpec& a, double s);
/// p-fold composition of an operator with dim_v == dim_w; p >= 1.
OperatorSpec power(const OperatorSpec& a, int p);
/// Operator with symbol A(xi)^T A(xi), order 2k. As a differential operator this is
/// (-1)^k A* A.
OperatorSpec generalized_laplacian(const OperatorSpec& a);

}  // namespace korn
