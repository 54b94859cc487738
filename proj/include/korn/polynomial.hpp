#pragma once

#include <Eigen/Dense>
#include <map>
#include <vector>

#include "korn/grid.hpp"
#include "korn/symbol.hpp"

namespace korn {

/// V-valued polynomial sum_beta c_beta (x - center)^beta.
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(int n, int dim, Eigen::VectorXd center);

  int n() const { return n_; }
  int dim() const { return dim_; }
  const Eigen::VectorXd& center() const { return center_; }
  const std::map<MultiIndex, Eigen::VectorXd>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  void add_term(const MultiIndex& beta, const Eigen::VectorXd& c);
  Eigen::VectorXd operator()(const Eigen::VectorXd& x) const;
  Polynomial derivative(const MultiIndex& alpha) const;
  /// Exact action of a constant-coefficient operator.
  Polynomial apply(const OperatorSpec& a) const;
  /// Adds the samples at every grid point into `f` (dims must match).
  void add_to(GridField& f, double sign = 1.0) const;
  /// dim x cells.size() matrix of values at the listed grid indices.
  Eigen::MatrixXd values_at(const BoxGrid& g, const std::vector<std::size_t>& cells) const;
  /// Same as add_to, restricted to the listed grid indices.
  void add_at(GridField& f, const std::vector<std::size_t>& cells, double sign = 1.0) const;

 private:
  int n_ = 0;
  int dim_ = 0;
  Eigen::VectorXd center_;
  std::map<MultiIndex, Eigen::VectorXd> terms_;
};

struct PolynomialSolve {
  Polynomial q;
  /// |A q - c| / max(|c|, tiny); nonzero when c is outside the reachable subspace
  double residual = 0.0;
};

/// Minimum-norm homogeneous degree-k q with A q = c, i.e. sum_alpha A_alpha alpha! q_alpha = c.
/// Least squares when c is not reachable; the residual reports the defect.
PolynomialSolve particular_polynomial_ls(const OperatorSpec& a, const Eigen::VectorXd& c,
                                         const Eigen::VectorXd& center);
/// As above but throws PreconditionError if the system is inconsistent beyond `tol`.
Polynomial particular_polynomial(const OperatorSpec& a, const Eigen::VectorXd& c,
                                 const Eigen::VectorXd& center, double tol = 1e-10);

}  // namespace korn
